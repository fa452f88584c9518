#include "whynot/instance.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <sstream>

#include "whynot/evaluate.hpp"

namespace whynot {

ConstantSet active_domain(const Database& db) {
  ConstantSet out;
  for (const auto& [name, ts] : db)
    for (const auto& t : ts) out.insert(t.begin(), t.end());
  return out;
}

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "ok    " : "FAIL  ") << c.constraint;
    if (!c.passed) {
      os << "  witnesses:";
      for (const auto& w : c.witnesses) os << " " << to_string(w);
    }
    os << "\n";
  }
  return os.str();
}

namespace {
std::string first_failure(const ValidationReport& r) {
  for (const auto& c : r.checks)
    if (!c.passed) {
      std::string msg = "constraint violated: " + c.constraint;
      if (!c.witnesses.empty()) msg += ", witness " + to_string(c.witnesses.front());
      return msg;
    }
  return "constraint violated";
}

const TupleSet& extent(const Database& db, const std::string& name) {
  static const TupleSet empty;
  auto it = db.find(name);
  return it == db.end() ? empty : it->second;
}

Tuple project(const Tuple& t, const std::vector<std::size_t>& ps) {
  Tuple out;
  out.reserve(ps.size());
  for (auto p : ps) out.push_back(t[p]);
  return out;
}
}  // namespace

ConstraintViolation::ConstraintViolation(ValidationReport report)
    : Error(first_failure(report)), report_(std::move(report)) {}

ValidationReport validate_constraints(const Schema& schema, const Database& data) {
  ValidationReport rep;
  for (const auto& c : schema.constraints()) {
    ConstraintCheck chk;
    chk.constraint = describe(c, schema);
    if (const auto* fd = std::get_if<FunctionalDependency>(&c)) {
      std::map<Tuple, const Tuple*> seen;
      for (const auto& t : extent(data, fd->relation)) {
        auto [it, fresh] = seen.emplace(project(t, fd->lhs), &t);
        if (!fresh && project(*it->second, fd->rhs) != project(t, fd->rhs)) {
          chk.passed = false;
          chk.witnesses.push_back(*it->second);
          chk.witnesses.push_back(t);
        }
      }
    } else if (const auto* id = std::get_if<InclusionDependency>(&c)) {
      TupleSet targets;
      for (const auto& t : extent(data, id->to)) targets.insert(project(t, id->to_positions));
      for (const auto& t : extent(data, id->from))
        if (!targets.count(project(t, id->from_positions))) {
          chk.passed = false;
          chk.witnesses.push_back(t);
        }
    } else {
      const auto& v = std::get<ViewDefinition>(c);
      TupleSet expected = evaluate(v.body, data);
      const auto& stored = extent(data, v.view);
      for (const auto& t : expected)
        if (!stored.count(t)) chk.witnesses.push_back(t);
      for (const auto& t : stored)
        if (!expected.count(t)) chk.witnesses.push_back(t);
      chk.passed = chk.witnesses.empty();
    }
    rep.checks.push_back(std::move(chk));
  }
  return rep;
}

Database materialize_views(const Schema& schema, Database base, bool overwrite) {
  for (const auto& r : schema.relations())
    if (!schema.is_view(r.name)) base.try_emplace(r.name);
  for (const auto& name : schema.view_order()) {
    if (!overwrite && base.count(name)) continue;
    auto result = evaluate(schema.view_definition(name)->body, base);
    base[name] = std::move(result);
  }
  return base;
}

Instance Instance::create(std::shared_ptr<const Schema> schema, Database data) {
  for (const auto& [name, ts] : data) {
    const auto& r = schema->relation(name);
    for (const auto& t : ts)
      if (t.size() != r.arity())
        throw SchemaError("tuple " + to_string(t) + " does not match the arity of " + name);
  }
  for (const auto& r : schema->relations()) data.try_emplace(r.name);
  auto rep = validate_constraints(*schema, data);
  if (!rep.ok()) throw ConstraintViolation(std::move(rep));
  static std::atomic<std::uint64_t> next_id{1};
  Instance inst;
  inst.schema_ = std::move(schema);
  inst.adom_ = std::make_shared<const ConstantSet>(whynot::active_domain(data));
  inst.data_ = std::make_shared<const Database>(std::move(data));
  inst.id_ = next_id++;
  return inst;
}

Instance Instance::with_views(std::shared_ptr<const Schema> schema, Database base) {
  for (const auto& r : schema->relations())
    if (!schema->is_view(r.name)) base.try_emplace(r.name);
  auto full = materialize_views(*schema, std::move(base), false);
  return create(std::move(schema), std::move(full));
}

const TupleSet& Instance::tuples(std::string_view relation) const {
  auto it = data_->find(relation);
  if (it == data_->end()) throw SchemaError("unknown relation '" + std::string(relation) + "'");
  return it->second;
}

namespace {

// Splits CSV text into records of raw fields.  Quoted fields keep a marker so
// they are read as text verbatim apart from numeric detection.
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      if (c != ' ' && c != '\t') any = true;
    }
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TupleSet read_csv(std::string_view text, const Relation& relation) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto rows = split_csv(text);
  if (rows.empty()) throw ParseError("CSV for " + relation.name + " has no header row");
  std::vector<std::size_t> col_to_pos;
  std::vector<bool> seen(relation.arity(), false);
  for (const auto& h : rows[0]) {
    auto p = relation.position(trim(h));
    if (!p) throw SchemaError("CSV for " + relation.name + ": unknown column '" + std::string(trim(h)) + "'");
    if (seen[*p]) throw SchemaError("CSV for " + relation.name + ": duplicate column");
    seen[*p] = true;
    col_to_pos.push_back(*p);
  }
  if (col_to_pos.size() != relation.arity())
    throw SchemaError("CSV for " + relation.name + " has " + std::to_string(col_to_pos.size()) +
                      " columns, relation has arity " + std::to_string(relation.arity()));
  TupleSet out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != col_to_pos.size())
      throw SchemaError("CSV for " + relation.name + " row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " fields, expected " +
                        std::to_string(col_to_pos.size()));
    Tuple t(relation.arity());
    for (std::size_t c = 0; c < col_to_pos.size(); ++c) t[col_to_pos[c]] = Constant::parse(rows[r][c]);
    out.insert(std::move(t));
  }
  return out;
}

Instance load_instance(std::shared_ptr<const Schema> schema,
                       const std::map<std::string, std::string>& tables) {
  Database db;
  for (const auto& [name, text] : tables) db[name] = read_csv(text, schema->relation(name));
  for (const auto& r : schema->relations())
    if (!schema->is_view(r.name) && !db.count(r.name))
      throw SchemaError("no data for base relation " + r.name);
  return Instance::with_views(std::move(schema), std::move(db));
}

Instance load_instance_dir(std::shared_ptr<const Schema> schema, const std::string& dir) {
  std::map<std::string, std::string> tables;
  for (const auto& r : schema->relations()) {
    auto path = std::filesystem::path(dir) / (r.name + ".csv");
    if (std::filesystem::exists(path)) tables[r.name] = read_text_file(path.string());
  }
  return load_instance(std::move(schema), tables);
}

}  // namespace whynot
