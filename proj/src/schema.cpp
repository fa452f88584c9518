#include "whynot/schema.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "whynot/error.hpp"

namespace whynot {

std::optional<std::size_t> Relation::position(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i] == attribute) return i;
  return std::nullopt;
}

std::size_t Relation::require_position(std::string_view attribute) const {
  auto p = position(attribute);
  if (!p) throw SchemaError("relation " + name + " has no attribute '" + std::string(attribute) + "'");
  return *p;
}

namespace {

void check_positions(const Relation& r, const std::vector<std::size_t>& ps) {
  for (auto p : ps)
    if (p >= r.arity()) throw SchemaError("attribute position out of range for " + r.name);
}

std::set<std::string> body_relations(const UnionQuery& q) {
  std::set<std::string> out;
  for (const auto& d : q.disjuncts)
    for (const auto& a : d.atoms) out.insert(a.relation);
  return out;
}

}  // namespace

Schema::Schema(std::vector<Relation> relations, std::vector<Constraint> constraints)
    : relations_(std::move(relations)), constraints_(std::move(constraints)) {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    if (r.name.empty()) throw SchemaError("relation with empty name");
    if (r.attributes.empty()) throw SchemaError("relation " + r.name + " has no attributes");
    std::set<std::string> seen(r.attributes.begin(), r.attributes.end());
    if (seen.size() != r.attributes.size())
      throw SchemaError("relation " + r.name + " repeats an attribute name");
    if (!index_.emplace(r.name, i).second) throw SchemaError("relation " + r.name + " declared twice");
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, FunctionalDependency>) {
            const auto& r = relation(c.relation);
            check_positions(r, c.lhs);
            check_positions(r, c.rhs);
          } else if constexpr (std::is_same_v<T, InclusionDependency>) {
            check_positions(relation(c.from), c.from_positions);
            check_positions(relation(c.to), c.to_positions);
            if (c.from_positions.size() != c.to_positions.size() || c.from_positions.empty())
              throw SchemaError("inclusion dependency " + c.from + " -> " + c.to +
                                " has mismatched attribute lists");
          } else {
            const auto& r = relation(c.view);
            if (c.body.disjuncts.empty()) throw SchemaError("view " + c.view + " has an empty body");
            if (c.body.arity() != r.arity())
              throw SchemaError("view " + c.view + " body has arity " +
                                std::to_string(c.body.arity()) + ", expected " +
                                std::to_string(r.arity()));
            for (const auto& d : c.body.disjuncts) {
              std::set<std::string> hv(d.head.begin(), d.head.end());
              if (hv.size() != d.head.size())
                throw SchemaError("view " + c.view + " repeats a head variable");
            }
            if (!view_index_.emplace(c.view, i).second)
              throw SchemaError("view " + c.view + " defined more than once");
          }
        },
        constraints_[i]);
  }
  for (const auto* v : views()) check_query(v->body);

  // Topological order with cycle reporting.
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    int& s = state[v];
    if (s == 2) return;
    if (s == 1) {
      std::string cycle;
      auto it = std::find(stack.begin(), stack.end(), v);
      for (; it != stack.end(); ++it) cycle += *it + " -> ";
      throw SchemaError("cyclic view dependency: " + cycle + v);
    }
    s = 1;
    stack.push_back(v);
    for (const auto& dep : body_relations(view_definition(v)->body))
      if (is_view(dep)) visit(dep);
    stack.pop_back();
    state[v] = 2;
    view_order_.push_back(v);
  };
  for (const auto& r : relations_)
    if (is_view(r.name)) visit(r.name);
}

const Relation* Schema::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &relations_[it->second];
}

const Relation& Schema::relation(std::string_view name) const {
  const auto* r = find(name);
  if (!r) throw SchemaError("unknown relation '" + std::string(name) + "'");
  return *r;
}

bool Schema::is_view(std::string_view name) const { return view_index_.count(name) > 0; }

const ViewDefinition* Schema::view_definition(std::string_view name) const {
  auto it = view_index_.find(name);
  return it == view_index_.end() ? nullptr : &std::get<ViewDefinition>(constraints_[it->second]);
}

std::vector<const FunctionalDependency*> Schema::fds() const {
  std::vector<const FunctionalDependency*> out;
  for (const auto& c : constraints_)
    if (auto* p = std::get_if<FunctionalDependency>(&c)) out.push_back(p);
  return out;
}

std::vector<const InclusionDependency*> Schema::ids() const {
  std::vector<const InclusionDependency*> out;
  for (const auto& c : constraints_)
    if (auto* p = std::get_if<InclusionDependency>(&c)) out.push_back(p);
  return out;
}

std::vector<const ViewDefinition*> Schema::views() const {
  std::vector<const ViewDefinition*> out;
  for (const auto& c : constraints_)
    if (auto* p = std::get_if<ViewDefinition>(&c)) out.push_back(p);
  return out;
}

ConstraintClass Schema::constraint_class() const {
  bool fd = !fds().empty(), id = !ids().empty(), view = !views().empty();
  if (fd || (id && view)) return ConstraintClass::Other;
  if (id) return ConstraintClass::IdsOnly;
  if (view) return ConstraintClass::ViewsOnly;
  return ConstraintClass::None;
}

std::size_t Schema::total_arity() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.arity();
  return n;
}

std::size_t Schema::max_arity() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n = std::max(n, r.arity());
  return n;
}

void Schema::check_query(const ConjunctiveQuery& q) const {
  for (const auto& a : q.atoms) {
    const auto& r = relation(a.relation);
    if (a.args.size() != r.arity())
      throw SchemaError("atom " + to_string(a) + " has " + std::to_string(a.args.size()) +
                        " arguments, relation " + r.name + " has arity " +
                        std::to_string(r.arity()));
  }
}

void Schema::check_query(const UnionQuery& q) const {
  for (const auto& d : q.disjuncts) {
    if (d.arity() != q.arity()) throw SchemaError("disjuncts of " + q.name + " differ in arity");
    check_query(d);
  }
}

namespace {
std::string attr_list(const Relation& r, const std::vector<std::size_t>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? "," : "") + r.attributes[ps[i]];
  return out;
}
}  // namespace

std::string describe(const Constraint& c, const Schema& s) {
  return std::visit(
      [&](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDependency>) {
          const auto& r = s.relation(k.relation);
          return "FD " + r.name + ": " + attr_list(r, k.lhs) + " -> " + attr_list(r, k.rhs);
        } else if constexpr (std::is_same_v<T, InclusionDependency>) {
          return "ID " + k.from + "[" + attr_list(s.relation(k.from), k.from_positions) + "] <= " +
                 k.to + "[" + attr_list(s.relation(k.to), k.to_positions) + "]";
        } else {
          return "view " + k.view;
        }
      },
      c);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

using ojson = nlohmann::ordered_json;

std::vector<std::size_t> positions_of(const Relation& r, const ojson& attrs) {
  if (!attrs.is_array()) throw ParseError("expected a list of attributes for " + r.name);
  std::vector<std::size_t> out;
  for (const auto& a : attrs) out.push_back(r.require_position(a.get<std::string>()));
  return out;
}

std::pair<std::string, std::vector<std::size_t>> read_id_side(
    const ojson& side, const std::map<std::string, Relation>& rels) {
  if (!side.is_array() || side.size() != 2) throw ParseError("ID side must be [relation, [attrs]]");
  auto name = side[0].get<std::string>();
  auto it = rels.find(name);
  if (it == rels.end()) throw SchemaError("unknown relation '" + name + "' in ID");
  return {name, positions_of(it->second, side[1])};
}

}  // namespace

Schema load_schema(std::string_view json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("schema JSON: ") + e.what());
  }
  try {
    std::vector<Relation> rels;
    std::map<std::string, Relation> by_name;
    if (!j.contains("relations") || !j["relations"].is_object())
      throw ParseError("schema JSON needs a \"relations\" object");
    for (const auto& [name, attrs] : j["relations"].items()) {
      Relation r{name, attrs.get<std::vector<std::string>>()};
      by_name[name] = r;
      rels.push_back(std::move(r));
    }
    auto lookup = [&](const std::string& n) -> const Relation& {
      auto it = by_name.find(n);
      if (it == by_name.end()) throw SchemaError("unknown relation '" + n + "'");
      return it->second;
    };
    std::vector<Constraint> cs;
    for (const auto& fd : j.value("fds", ojson::array())) {
      const auto& r = lookup(fd.at("rel").get<std::string>());
      cs.push_back(FunctionalDependency{r.name, positions_of(r, fd.at("lhs")), positions_of(r, fd.at("rhs"))});
    }
    for (const auto& id : j.value("ids", ojson::array())) {
      auto [from, fp] = read_id_side(id.at("from"), by_name);
      auto [to, tp] = read_id_side(id.at("to"), by_name);
      cs.push_back(InclusionDependency{from, fp, to, tp});
    }
    for (const auto& v : j.value("views", ojson::array())) {
      auto name = v.at("rel").get<std::string>();
      lookup(name);
      auto body = parse_query(v.at("body").get<std::string>());
      body.name = name;
      cs.push_back(ViewDefinition{name, std::move(body)});
    }
    return Schema(std::move(rels), std::move(cs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema JSON: ") + e.what());
  }
}

Schema load_schema_file(const std::string& path) { return load_schema(read_text_file(path)); }

}  // namespace whynot
