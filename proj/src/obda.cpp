#include "whynot/obda.hpp"

#include <set>

#include "json.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"

namespace whynot {

std::string BasicConcept::str() const {
  if (!exists) return name;
  return "exists " + name + (inverse ? "-" : "");
}

namespace {

void close(std::vector<std::vector<bool>>& reach) {
  const std::size_t n = reach.size();
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
}

}  // namespace

TBox::TBox(std::vector<std::string> concepts, std::vector<std::string> roles,
           std::vector<ConceptInclusion> concept_axioms, std::vector<RoleInclusion> role_axioms)
    : concepts_(std::move(concepts)),
      roles_(std::move(roles)),
      concept_axioms_(std::move(concept_axioms)),
      role_axioms_(std::move(role_axioms)) {
  for (std::size_t i = 0; i < concepts_.size(); ++i)
    if (!cidx_.emplace(concepts_[i], i).second) throw SchemaError("concept '" + concepts_[i] + "' declared twice");
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (!ridx_.emplace(roles_[i], i).second) throw SchemaError("role '" + roles_[i] + "' declared twice");
    if (cidx_.count(roles_[i])) throw SchemaError("'" + roles_[i] + "' is both a concept and a role");
  }

  const std::size_t nc = concept_nodes(), nr = role_nodes();
  rreach_.assign(nr, std::vector<bool>(nr, false));
  for (const auto& ax : role_axioms_) {
    auto a = role_node(ax.lhs), b = role_node(ax.rhs);  // validates names
    if (ax.negated) continue;
    rreach_[a][b] = true;
    rreach_[a ^ 1][b ^ 1] = true;  // R ⊑ S gives R⁻ ⊑ S⁻
  }
  close(rreach_);

  creach_.assign(nc, std::vector<bool>(nc, false));
  for (const auto& ax : concept_axioms_) {
    auto a = concept_node(ax.lhs), b = concept_node(ax.rhs);
    if (!ax.negated) creach_[a][b] = true;
  }
  const std::size_t base = concepts_.size();
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t s = 0; s < nr; ++s)
      if (r != s && rreach_[r][s]) creach_[base + r][base + s] = true;  // ∃R ⊑ ∃S
  close(creach_);

  // Unsatisfiability: reaching both sides of a negative axiom, propagated
  // through subsumption and between a role, its inverse and their domains.
  cunsat_.assign(nc, false);
  runsat_.assign(nr, false);
  for (std::size_t c = 0; c < nc; ++c)
    for (const auto& ax : concept_axioms_)
      if (ax.negated && creach_[c][concept_node(ax.lhs)] && creach_[c][concept_node(ax.rhs)])
        cunsat_[c] = true;
  for (std::size_t r = 0; r < nr; ++r)
    for (const auto& ax : role_axioms_) {
      if (!ax.negated) continue;
      auto a = role_node(ax.lhs), b = role_node(ax.rhs);
      if ((rreach_[r][a] && rreach_[r][b]) || (rreach_[r][a ^ 1] && rreach_[r][b ^ 1])) runsat_[r] = true;
    }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t r = 0; r < nr; ++r) {
      bool u = runsat_[r] || runsat_[r ^ 1] || cunsat_[base + r] || cunsat_[base + (r ^ 1)];
      for (std::size_t s = 0; s < nr && !u; ++s) u = rreach_[r][s] && runsat_[s];
      if (u && !(runsat_[r] && cunsat_[base + r])) {
        runsat_[r] = cunsat_[base + r] = true;
        changed = true;
      }
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (cunsat_[c]) continue;
      for (std::size_t d = 0; d < nc; ++d)
        if (creach_[c][d] && cunsat_[d]) {
          cunsat_[c] = true;
          changed = true;
          break;
        }
    }
  }

  for (const auto& n : concepts_) universe_.push_back({n, false, false});
  std::set<BasicConcept> used;
  for (const auto& ax : concept_axioms_) {
    used.insert(ax.lhs);
    used.insert(ax.rhs);
  }
  for (const auto& r : roles_)
    for (bool inv : {false, true})
      if (used.count({r, true, inv})) universe_.push_back({r, true, inv});
}

bool TBox::is_role(std::string_view name) const { return ridx_.count(name) > 0; }

std::size_t TBox::concept_node(const BasicConcept& c) const {
  if (!c.exists) {
    auto it = cidx_.find(c.name);
    if (it == cidx_.end()) throw SchemaError("unknown concept '" + c.name + "'");
    return it->second;
  }
  return concepts_.size() + role_node({c.name, c.inverse});
}

std::size_t TBox::role_node(const BasicRole& r) const {
  auto it = ridx_.find(r.name);
  if (it == ridx_.end()) throw SchemaError("unknown role '" + r.name + "'");
  return 2 * it->second + (r.inverse ? 1 : 0);
}

BasicConcept TBox::concept_of_node(std::size_t n) const {
  if (n < concepts_.size()) return {concepts_[n], false, false};
  auto r = role_of_node(n - concepts_.size());
  return {r.name, true, r.inverse};
}

BasicRole TBox::role_of_node(std::size_t n) const { return {roles_[n / 2], (n & 1) != 0}; }

bool TBox::entails(const BasicConcept& sub, const BasicConcept& super) const {
  auto a = concept_node(sub), b = concept_node(super);
  return cunsat_[a] || creach_[a][b];
}

bool TBox::entails(const BasicRole& sub, const BasicRole& super) const {
  auto a = role_node(sub), b = role_node(super);
  return runsat_[a] || rreach_[a][b];
}

bool TBox::unsatisfiable(const BasicConcept& c) const { return cunsat_[concept_node(c)]; }
bool TBox::unsatisfiable(const BasicRole& r) const { return runsat_[role_node(r)]; }

BasicConcept TBox::parse_concept(std::string_view text) const {
  auto t = trim(text);
  if (t.substr(0, 7) == "exists ") {
    auto r = trim(t.substr(7));
    bool inv = !r.empty() && r.back() == '-';
    if (inv) r.remove_suffix(1);
    BasicConcept c{std::string(trim(r)), true, inv};
    concept_node(c);
    return c;
  }
  BasicConcept c{std::string(t), false, false};
  concept_node(c);
  return c;
}

bool tbox_subsumption(const TBox& t, const BasicConcept& c1, const BasicConcept& c2) {
  return t.entails(c1, c2);
}

namespace {

BasicRole parse_role(std::string_view text) {
  auto t = trim(text);
  bool inv = !t.empty() && t.back() == '-';
  if (inv) t.remove_suffix(1);
  return {std::string(trim(t)), inv};
}

}  // namespace

ObdaSpec load_obda(std::string_view json_text, std::shared_ptr<const Schema> schema) {
  using json = nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("OBDA JSON: ") + e.what());
  }
  try {
    auto concepts = j.value("concepts", std::vector<std::string>{});
    auto roles = j.value("roles", std::vector<std::string>{});
    std::set<std::string> role_set(roles.begin(), roles.end());
    std::vector<ConceptInclusion> cax;
    std::vector<RoleInclusion> rax;
    // A probe TBox resolves concept expressions while axioms are read.
    TBox names(concepts, roles, {}, {});
    for (const auto& ax : j.value("axioms", json::array())) {
      std::string lhs = ax.at("lhs").get<std::string>();
      std::string rhs = ax.at("rhs").get<std::string>();
      bool neg = !rhs.empty() && rhs.front() == '!';
      if (neg) rhs.erase(0, 1);
      auto lrole = parse_role(lhs);
      if (trim(lhs).substr(0, 7) != "exists " && role_set.count(lrole.name)) {
        rax.push_back({lrole, parse_role(rhs), neg});
        if (!role_set.count(rax.back().rhs.name))
          throw SchemaError("role axiom with non-role right-hand side '" + rhs + "'");
      } else {
        cax.push_back({names.parse_concept(lhs), names.parse_concept(rhs), neg});
      }
    }
    ObdaSpec spec{TBox(concepts, roles, std::move(cax), std::move(rax)), schema, {}};
    for (const auto& m : j.value("mappings", json::array())) {
      std::string head = m.at("head").get<std::string>();
      auto open = head.find('('), close = head.rfind(')');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("mapping head '" + head + "' must look like Name(x) or Name(x,y)");
      std::string target(trim(std::string_view(head).substr(0, open)));
      std::vector<std::string> vars;
      std::string_view args = std::string_view(head).substr(open + 1, close - open - 1);
      while (!args.empty()) {
        auto comma = args.find(',');
        vars.emplace_back(trim(args.substr(0, comma)));
        if (vars.back().empty()) throw ParseError("empty variable in mapping head '" + head + "'");
        if (comma == std::string_view::npos) break;
        args.remove_prefix(comma + 1);
      }
      GavMapping g{parse_body(m.at("body").get<std::string>(), vars), target, false};
      schema->check_query(g.body);
      if (spec.tbox.is_role(target)) {
        if (vars.size() != 2) throw SchemaError("role mapping for '" + target + "' needs two variables");
        g.role = true;
      } else {
        spec.tbox.parse_concept(target);
        if (vars.size() != 1) throw SchemaError("concept mapping for '" + target + "' needs one variable");
      }
      spec.mappings.push_back(std::move(g));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("OBDA JSON: ") + e.what());
  }
}

ObdaSpec load_obda_file(const std::string& path, std::shared_ptr<const Schema> schema) {
  return load_obda(read_text_file(path), std::move(schema));
}

Saturation saturate(const ObdaSpec& spec, const Instance& inst) {
  const TBox& t = spec.tbox;
  const std::size_t nc = t.concept_nodes(), nr = t.role_nodes(), base = t.concept_names().size();
  std::vector<ConstantSet> asserted(nc);
  std::vector<TupleSet> asserted_pairs(nr);
  for (const auto& m : spec.mappings) {
    for (const auto& tup : evaluate(m.body, inst)) {
      if (m.role) {
        auto r = t.role_node({m.target, false});
        asserted_pairs[r].insert({tup[0], tup[1]});
        asserted_pairs[r ^ 1].insert({tup[1], tup[0]});
      } else {
        asserted[t.concept_node({m.target, false, false})].insert(tup[0]);
      }
    }
  }
  Saturation s;
  s.pairs.assign(nr, {});
  const auto& rr = t.role_reach();
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t q = 0; q < nr; ++q)
      if (rr[r][q]) s.pairs[q].insert(asserted_pairs[r].begin(), asserted_pairs[r].end());
  for (std::size_t r = 0; r < nr; ++r)
    for (const auto& p : s.pairs[r]) asserted[base + r].insert(p[0]);
  s.members.assign(nc, {});
  const auto& cr = t.concept_reach();
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t d = 0; d < nc; ++d)
      if (cr[c][d]) s.members[d].insert(asserted[c].begin(), asserted[c].end());

  for (const auto& ax : t.concept_axioms()) {
    if (!ax.negated) continue;
    const auto& a = s.members[t.concept_node(ax.lhs)];
    const auto& b = s.members[t.concept_node(ax.rhs)];
    for (const auto& c : a)
      if (b.count(c))
        s.violations.push_back(c.str() + " violates " + ax.lhs.str() + " <= !" + ax.rhs.str());
  }
  for (const auto& ax : t.role_axioms()) {
    if (!ax.negated) continue;
    const auto& a = s.pairs[t.role_node(ax.lhs)];
    const auto& b = s.pairs[t.role_node(ax.rhs)];
    for (const auto& p : a)
      if (b.count(p))
        s.violations.push_back(to_string(p) + " violates " + ax.lhs.str() + " <= !" + ax.rhs.str());
  }
  // Members forced into a concept that no model can populate.
  for (std::size_t c = 0; c < nc; ++c)
    if (t.unsatisfiable(t.concept_of_node(c)))
      for (const auto& m : s.members[c])
        s.violations.push_back(m.str() + " belongs to unsatisfiable " + t.concept_of_node(c).str());
  return s;
}

SolutionCheck check_solution_exists(const ObdaSpec& spec, const Instance& inst) {
  auto s = saturate(spec, inst);
  return {s.has_solution(), std::move(s.violations)};
}

ConstantSet certain_extension(const ObdaSpec& spec, const Instance& inst, const BasicConcept& c) {
  auto s = saturate(spec, inst);
  if (!s.has_solution()) throw NoSolution("no solution: " + s.violations.front());
  return s.members[spec.tbox.concept_node(c)];
}

ObdaOntology::ObdaOntology(std::shared_ptr<const ObdaSpec> spec) : spec_(std::move(spec)) {}

bool ObdaOntology::subsumed(std::size_t sub, std::size_t super) const {
  const auto& u = spec_->tbox.universe();
  return spec_->tbox.entails(u[sub], u[super]);
}

std::shared_ptr<const Saturation> ObdaOntology::saturation(const Instance& inst) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(inst.id());
  if (it != cache_.end()) return it->second;
  auto s = std::make_shared<const Saturation>(saturate(*spec_, inst));
  cache_.emplace(inst.id(), s);
  return s;
}

Extension ObdaOntology::extension(std::size_t i, const Instance& inst) const {
  auto s = saturation(inst);
  if (!s->has_solution()) throw NoSolution("no solution: " + s->violations.front());
  return Extension{false, s->members[spec_->tbox.concept_node(spec_->tbox.universe()[i])]};
}

std::size_t ObdaOntology::length(std::size_t i) const {
  const auto& c = spec_->tbox.universe()[i];
  return c.exists ? (c.inverse ? 3 : 2) : 1;
}

ObdaOntology induce_ontology(std::shared_ptr<const ObdaSpec> spec) { return ObdaOntology(std::move(spec)); }

}  // namespace whynot
