#include <algorithm>
#include <functional>

#include "json.hpp"
#include "whynot/error.hpp"
#include "whynot/explain.hpp"

namespace whynot {

std::size_t explanation_length(const Explanation& e, const FiniteOntology& o) {
  std::size_t n = 0;
  for (auto i : e) n += o.length(i);
  return n;
}

std::size_t explanation_length(const ConceptExplanation& e) {
  std::size_t n = 0;
  for (const auto& c : e) n += c.length();
  return n;
}

std::optional<Explanation> shortest_mge(const WhyNotInstance& w, const FiniteOntology& o, std::size_t budget) {
  // Every member of an equivalence class is a most-general explanation, so the
  // search runs before classes are collapsed.
  std::optional<Explanation> best;
  std::size_t best_len = 0;
  for (const auto& e : all_explanations(w, o, budget)) {
    auto len = explanation_length(e, o);
    if (best && len >= best_len) continue;
    if (!check_mge(w, o, e)) continue;
    best = e;
    best_len = len;
  }
  return best;
}

std::optional<std::size_t> degree_of_generality(const std::vector<Extension>& exts) {
  std::size_t n = 0;
  for (const auto& e : exts) {
    if (e.all) return std::nullopt;
    n += e.members.size();
  }
  return n;
}

std::optional<Explanation> card_maximal_explanation(const WhyNotInstance& w, const FiniteOntology& o,
                                                    std::size_t budget) {
  auto ext = o.extensions(w.instance());
  std::optional<Explanation> best;
  std::optional<std::size_t> best_deg;
  for (const auto& e : all_explanations(w, o, budget)) {
    std::vector<Extension> xs;
    for (auto i : e) xs.push_back(ext[i]);
    auto d = degree_of_generality(xs);
    bool better = !best || (best_deg && (!d || *d > *best_deg));
    if (better) {
      best = e;
      best_deg = d;
    }
  }
  return best;
}

ConceptExplanation minimize_explanation(const ConceptExplanation& e, const Instance& inst) {
  ConceptExplanation out;
  for (const auto& c : e) out.push_back(minimize_irredundant(c, inst));
  return out;
}

Concept minimize_equivalent_length(const Concept& c, const Instance& inst, std::size_t budget) {
  Concept best = minimize_irredundant(c, inst);
  const auto target = extension(c, inst);
  if (target.all) return Concept::top();
  ConstantSet pool = inst.active_domain();
  auto extra = c.constants();
  pool.insert(extra.begin(), extra.end());

  struct Atom {
    Concept value;
    Extension ext;
    std::size_t len;
  };
  std::vector<Atom> atoms;
  for (auto& a : enumerate_atomic_concepts(Fragment::Full, inst.schema(), pool, inst.data(), Dedup::Syntactic)) {
    auto e = extension(a, inst);
    if (!target.subset_of(e)) continue;
    auto len = a.length();
    atoms.push_back({std::move(a), std::move(e), len});
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.len < b.len; });

  std::size_t best_len = best.length(), visited = 0;
  std::vector<std::size_t> chosen;
  // Depth-first over conjunctions in index order, pruned by length.
  std::function<void(std::size_t, const Extension&, std::size_t)> dfs =
      [&](std::size_t from, const Extension& ext, std::size_t len) {
        for (std::size_t i = from; i < atoms.size(); ++i) {
          if (visited >= budget) return;
          std::size_t next_len = len + atoms[i].len + (chosen.empty() ? 0 : 1);
          if (next_len >= best_len) return;  // atoms are sorted by length
          ++visited;
          auto next = ext.intersect(atoms[i].ext);
          chosen.push_back(i);
          if (next == target) {
            std::vector<AtomicConcept> parts;
            for (auto k : chosen) parts.push_back(atoms[k].value.conjuncts().front());
            best = Concept(std::move(parts));
            best_len = best.length();
          } else {
            dfs(i + 1, next, next_len);
          }
          chosen.pop_back();
        }
      };
  dfs(0, Extension::everything(), 0);
  return best;
}

ConceptExplanation minimize_equivalent_length(const ConceptExplanation& e, const Instance& inst,
                                              std::size_t budget) {
  ConceptExplanation out;
  for (const auto& c : e) out.push_back(minimize_equivalent_length(c, inst, budget));
  return out;
}

namespace {

nlohmann::json constant_json(const Constant& c) {
  if (c.is_number()) return c.as_number();
  return c.as_text();
}

}  // namespace

std::string to_json(const ExplanationReport& r, int indent) {
  using json = nlohmann::json;
  json out = {{"explanations", json::array()}, {"generality", json::array()}};
  for (std::size_t k = 0; k < r.concepts.size(); ++k) {
    json e = {{"concepts", r.concepts[k]}, {"extensions", json::array()}};
    if (k < r.extensions.size())
      for (const auto& x : r.extensions[k]) {
        if (x.all) {
          e["extensions"].push_back("*");
          continue;
        }
        json members = json::array();
        for (const auto& c : x.members) members.push_back(constant_json(c));
        e["extensions"].push_back(std::move(members));
      }
    out["explanations"].push_back(std::move(e));
  }
  for (const auto& g : r.generality)
    out["generality"].push_back({{"left", g.left}, {"right", g.right}, {"relation", to_string(g.relation)}});
  return out.dump(indent);
}

}  // namespace whynot
