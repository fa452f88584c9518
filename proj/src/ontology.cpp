#include "whynot/ontology.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"

namespace whynot {

std::vector<Extension> FiniteOntology::extensions(const Instance& inst) const {
  std::vector<Extension> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(extension(i, inst));
  return out;
}

std::optional<std::size_t> FiniteOntology::find(std::string_view label) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (this->label(i) == label) return i;
  return std::nullopt;
}

ConsistencyReport check_consistency(const FiniteOntology& o, const Instance& inst) {
  ConsistencyReport rep;
  auto ext = o.extensions(inst);
  for (std::size_t a = 0; a < o.size(); ++a)
    for (std::size_t b = 0; b < o.size(); ++b) {
      if (a == b || !o.subsumed(a, b) || ext[a].subset_of(ext[b])) continue;
      rep.consistent = false;
      Constant witness;
      if (ext[a].all) witness = Constant::text("*");
      else
        for (const auto& c : ext[a].members)
          if (!ext[b].contains(c)) {
            witness = c;
            break;
          }
      rep.violations.push_back({a, b, witness});
    }
  return rep;
}

Extension ext_of(const FiniteOntology& o, std::string_view label, const Instance& inst) {
  auto i = o.find(label);
  if (!i) throw SchemaError("unknown concept '" + std::string(label) + "'");
  return o.extension(*i, inst);
}

FileOntology::FileOntology(std::vector<std::string> names,
                           const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           std::vector<Definition> definitions)
    : names_(std::move(names)), defs_(std::move(definitions)) {
  const std::size_t n = names_.size();
  if (defs_.size() != n) throw SchemaError("ontology needs one extension definition per concept");
  closure_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) closure_[i * n + i] = true;
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw SchemaError("subsumption edge references an undeclared concept");
    closure_[a * n + b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (closure_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (closure_[k * n + j]) closure_[i * n + j] = true;
}

Extension FileOntology::extension(std::size_t i, const Instance& inst) const {
  if (const auto* list = std::get_if<ConstantSet>(&defs_[i])) return Extension{false, *list};
  return Extension{false, [&] {
                     ConstantSet out;
                     for (const auto& t : evaluate(std::get<UnionQuery>(defs_[i]), inst))
                       out.insert(t.front());
                     return out;
                   }()};
}

FileOntology load_ontology(std::string_view json_text, const Schema& schema) {
  using json = nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("ontology JSON: ") + e.what());
  }
  try {
    std::vector<std::string> names = j.at("concepts").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (!idx.emplace(names[i], i).second)
        throw SchemaError("concept '" + names[i] + "' declared twice");
    auto lookup = [&](const std::string& n) {
      auto it = idx.find(n);
      if (it == idx.end()) throw SchemaError("undeclared concept '" + n + "'");
      return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const json subs = j.value("subsumptions", json::array());
    for (const auto& e : subs) {
      if (!e.is_array() || e.size() != 2) throw ParseError("subsumption must be [sub, super]");
      edges.emplace_back(lookup(e[0].get<std::string>()), lookup(e[1].get<std::string>()));
    }
    std::vector<FileOntology::Definition> defs(names.size(), ConstantSet{});
    const json ext = j.value("ext", json::object());
    for (const auto& [name, d] : ext.items()) {
      auto i = lookup(name);
      if (d.contains("list")) {
        ConstantSet s;
        for (const auto& v : d["list"]) {
          if (v.is_number()) s.insert(Constant::number(v.get<double>()));
          else s.insert(Constant::parse(v.get<std::string>()));
        }
        defs[i] = std::move(s);
      } else if (d.contains("query")) {
        auto q = parse_query(d["query"].get<std::string>());
        schema.check_query(q);
        if (q.arity() != 1) throw SchemaError("extension query for '" + name + "' must be unary");
        defs[i] = std::move(q);
      } else {
        throw ParseError("extension of '" + name + "' needs \"list\" or \"query\"");
      }
    }
    return FileOntology(std::move(names), edges, std::move(defs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ontology JSON: ") + e.what());
  }
}

FileOntology load_ontology_file(const std::string& path, const Schema& schema) {
  return load_ontology(read_text_file(path), schema);
}

void ConceptOntology::sort_unique(std::vector<Concept> concepts) {
  std::sort(concepts.begin(), concepts.end());
  concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
  concepts_ = std::move(concepts);
}

ConceptOntology ConceptOntology::instance_order(std::vector<Concept> concepts, const Instance& inst) {
  ConceptOntology o;
  o.sort_unique(std::move(concepts));
  const std::size_t n = o.concepts_.size();
  std::vector<Extension> ext;
  for (const auto& c : o.concepts_) ext.push_back(whynot::extension(c, inst));
  o.order_.assign(n * n, false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) o.order_[a * n + b] = ext[a].subset_of(ext[b]);
  return o;
}

ConceptOntology ConceptOntology::schema_order(std::vector<Concept> concepts, const Schema& schema) {
  ConceptOntology o;
  o.sort_unique(std::move(concepts));
  const std::size_t n = o.concepts_.size();
  SchemaSubsumption sub(schema);
  o.order_.assign(n * n, false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) o.order_[a * n + b] = a == b || sub(o.concepts_[a], o.concepts_[b]);
  return o;
}

}  // namespace whynot
