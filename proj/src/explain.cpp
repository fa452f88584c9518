#include "whynot/explain.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"

namespace whynot {

WhyNotInstance WhyNotInstance::create(Instance instance, UnionQuery query, Tuple missing,
                                      std::optional<TupleSet> ans, bool trusted) {
  WhyNotInstance w(std::move(instance));
  for (const auto& d : query.disjuncts) {
    w.instance_.schema().check_query(d);
    if (d.head.size() != missing.size())
      throw SchemaError("missing tuple has " + std::to_string(missing.size()) +
                        " constants but the query has arity " + std::to_string(d.head.size()));
  }
  w.query_ = std::move(query);
  w.missing_ = std::move(missing);
  auto computed = [&] { return evaluate(w.query_, w.instance_); };
  if (!ans) {
    w.ans_ = computed();
  } else {
    for (const auto& t : *ans)
      if (t.size() != w.missing_.size()) throw SchemaError("answer " + to_string(t) + " has the wrong arity");
    if (!trusted && *ans != computed()) throw Error("supplied answers differ from the query's answers");
    w.ans_ = std::move(*ans);
  }
  if (w.ans_.count(w.missing_)) throw TuplePresent("tuple is present: " + to_string(w.missing_));
  w.pool_ = w.instance_.active_domain();
  w.pool_.insert(w.missing_.begin(), w.missing_.end());
  return w;
}

const char* to_string(Generality g) {
  switch (g) {
    case Generality::Less: return "less";
    case Generality::Greater: return "greater";
    case Generality::Equivalent: return "equivalent";
    case Generality::Incomparable: return "incomparable";
  }
  return "?";
}

bool is_explanation(const std::vector<Extension>& exts, const WhyNotInstance& w) {
  if (exts.size() != w.arity()) throw SchemaError("explanation arity differs from the query arity");
  for (std::size_t i = 0; i < exts.size(); ++i)
    if (!exts[i].contains(w.missing()[i])) return false;
  for (const auto& t : w.answers()) {
    bool inside = true;
    for (std::size_t i = 0; i < t.size() && inside; ++i) inside = exts[i].contains(t[i]);
    if (inside) return false;
  }
  return true;
}

bool is_explanation(const Explanation& e, const WhyNotInstance& w, const FiniteOntology& o) {
  std::vector<Extension> exts;
  for (auto i : e) exts.push_back(o.extension(i, w.instance()));
  return is_explanation(exts, w);
}

namespace {

std::vector<Extension> extensions_of(const ConceptExplanation& e, const Instance& inst) {
  std::vector<Extension> out;
  for (const auto& c : e) out.push_back(extension(c, inst));
  return out;
}

template <class Leq>
Generality generality(std::size_t m, Leq leq) {
  bool le = true, ge = true;
  for (std::size_t i = 0; i < m; ++i) {
    le = le && leq(i, true);
    ge = ge && leq(i, false);
  }
  if (le && ge) return Generality::Equivalent;
  if (le) return Generality::Less;
  if (ge) return Generality::Greater;
  return Generality::Incomparable;
}

void same_arity(std::size_t a, std::size_t b) {
  if (a != b) throw SchemaError("explanations of different arity cannot be compared");
}

}  // namespace

bool is_explanation(const ConceptExplanation& e, const WhyNotInstance& w) {
  return is_explanation(extensions_of(e, w.instance()), w);
}

Generality compare_generality(const Explanation& e1, const Explanation& e2, const FiniteOntology& o) {
  same_arity(e1.size(), e2.size());
  return generality(e1.size(), [&](std::size_t i, bool fwd) {
    return fwd ? o.subsumed(e1[i], e2[i]) : o.subsumed(e2[i], e1[i]);
  });
}

Generality compare_generality(const ConceptExplanation& e1, const ConceptExplanation& e2,
                              const Instance& inst) {
  same_arity(e1.size(), e2.size());
  auto x1 = extensions_of(e1, inst), x2 = extensions_of(e2, inst);
  return generality(e1.size(), [&](std::size_t i, bool fwd) {
    return fwd ? x1[i].subset_of(x2[i]) : x2[i].subset_of(x1[i]);
  });
}

Generality compare_generality_schema(const ConceptExplanation& e1, const ConceptExplanation& e2,
                                     const Schema& schema) {
  same_arity(e1.size(), e2.size());
  SchemaSubsumption sub(schema);
  return generality(e1.size(), [&](std::size_t i, bool fwd) {
    return fwd ? sub(e1[i], e2[i]) : sub(e2[i], e1[i]);
  });
}

namespace {

// Backtracking over the candidate tuples of a finite ontology.  Position i
// only ranges over concepts containing the i-th missing constant; answers are
// filtered as positions are fixed.
class CandidateSearch {
 public:
  CandidateSearch(const WhyNotInstance& w, const FiniteOntology& o, std::size_t budget)
      : w_(w), budget_(budget), ext_(o.extensions(w.instance())) {
    for (std::size_t i = 0; i < w.arity(); ++i) {
      cands_.emplace_back();
      for (std::size_t c = 0; c < o.size(); ++c)
        if (ext_[c].contains(w.missing()[i])) cands_.back().push_back(c);
    }
  }

  const std::vector<Extension>& extensions() const { return ext_; }

  // visit(explanation) returns false to stop.
  void run(const std::function<bool(const Explanation&)>& visit) {
    if (w_.arity() == 0) return;
    std::vector<const Tuple*> alive;
    for (const auto& t : w_.answers()) alive.push_back(&t);
    Explanation cur;
    stop_ = false;
    step(0, alive, cur, visit);
  }

 private:
  void step(std::size_t pos, const std::vector<const Tuple*>& alive, Explanation& cur,
            const std::function<bool(const Explanation&)>& visit) {
    if (pos == w_.arity()) {
      if (alive.empty() && !visit(cur)) stop_ = true;
      return;
    }
    for (auto c : cands_[pos]) {
      if (stop_) return;
      if (++visited_ > budget_) throw BudgetExceeded("explanation search exceeded the budget");
      std::vector<const Tuple*> next;
      for (const auto* t : alive)
        if (ext_[c].contains((*t)[pos])) next.push_back(t);
      cur.push_back(c);
      step(pos + 1, next, cur, visit);
      cur.pop_back();
    }
  }

  const WhyNotInstance& w_;
  std::size_t budget_, visited_ = 0;
  bool stop_ = false;
  std::vector<Extension> ext_;
  std::vector<std::vector<std::size_t>> cands_;
};

std::vector<std::vector<std::size_t>> strictly_above(const FiniteOntology& o) {
  std::vector<std::vector<std::size_t>> up(o.size());
  for (std::size_t a = 0; a < o.size(); ++a)
    for (std::size_t b = 0; b < o.size(); ++b)
      if (o.subsumed(a, b) && !o.subsumed(b, a)) up[a].push_back(b);
  return up;
}

// Under consistency, E has a strictly more general explanation iff raising a
// single position does.
bool no_single_raise(const Explanation& e, const WhyNotInstance& w, const std::vector<Extension>& ext,
                     const std::vector<std::vector<std::size_t>>& up) {
  std::vector<Extension> cur;
  for (auto i : e) cur.push_back(ext[i]);
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto keep = cur[i];
    for (auto c : up[e[i]]) {
      cur[i] = ext[c];
      if (is_explanation(cur, w)) return false;
    }
    cur[i] = keep;
  }
  return true;
}

std::vector<Explanation> all_mges(const WhyNotInstance& w, const FiniteOntology& o, std::size_t budget) {
  CandidateSearch search(w, o, budget);
  auto up = strictly_above(o);
  std::vector<Explanation> out;
  search.run([&](const Explanation& e) {
    if (no_single_raise(e, w, search.extensions(), up)) out.push_back(e);
    return true;
  });
  return out;
}

}  // namespace

std::vector<Explanation> all_explanations(const WhyNotInstance& w, const FiniteOntology& o,
                                          std::size_t budget) {
  CandidateSearch search(w, o, budget);
  std::vector<Explanation> out;
  search.run([&](const Explanation& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::vector<Explanation> exhaustive_mge(const WhyNotInstance& w, const FiniteOntology& o,
                                        std::size_t budget) {
  std::vector<Explanation> kept;
  for (auto& e : all_mges(w, o, budget)) {
    bool dup = std::any_of(kept.begin(), kept.end(), [&](const Explanation& k) {
      return compare_generality(k, e, o) == Generality::Equivalent;
    });
    if (!dup) kept.push_back(std::move(e));
  }
  return kept;
}

bool exists_explanation(const WhyNotInstance& w, const FiniteOntology& o, std::size_t budget) {
  CandidateSearch search(w, o, budget);
  bool found = false;
  search.run([&](const Explanation&) {
    found = true;
    return false;
  });
  return found;
}

bool check_mge(const WhyNotInstance& w, const FiniteOntology& o, const Explanation& e) {
  if (e.size() != w.arity()) throw SchemaError("explanation arity differs from the query arity");
  for (auto i : e)
    if (i >= o.size()) throw SchemaError("concept index out of range");
  auto ext = o.extensions(w.instance());
  std::vector<Extension> cur;
  for (auto i : e) cur.push_back(ext[i]);
  if (!is_explanation(cur, w)) return false;
  return no_single_raise(e, w, ext, strictly_above(o));
}

namespace {

ConstantSet column(const TupleSet& ts, std::size_t a) {
  ConstantSet out;
  for (const auto& t : ts) out.insert(t[a]);
  return out;
}

bool covers(const ConstantSet& col, const ConstantSet& x) {
  return std::all_of(x.begin(), x.end(), [&](const Constant& c) { return col.count(c) > 0; });
}

void require_nonempty(const ConstantSet& x) {
  if (x.empty()) throw Error("least upper bound of an empty set is undefined");
}

}  // namespace

Concept lub_selection_free(const Instance& inst, const ConstantSet& x) {
  require_nonempty(x);
  std::vector<AtomicConcept> parts;
  if (x.size() == 1) parts.push_back(Nominal{*x.begin()});
  for (const auto& r : inst.schema().relations()) {
    const auto& ts = inst.tuples(r.name);
    for (std::size_t a = 0; a < r.arity(); ++a)
      if (covers(column(ts, a), x)) parts.push_back(Projection{r.name, a, r.attributes[a], {}});
  }
  if (parts.empty()) return Concept::top();
  return Concept(std::move(parts));
}

namespace {

using RowSet = std::vector<bool>;

RowSet select_rows(const std::vector<const Tuple*>& rows, const std::vector<Selection>& conds) {
  RowSet out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out[i] = std::all_of(conds.begin(), conds.end(),
                         [&](const Selection& s) { return satisfies((*rows[i])[s.attribute], s.op, s.value); });
  return out;
}

// Tightest per-attribute conditions around the chosen rows, with the
// redundant ones dropped in canonical order.
std::vector<Selection> box_conditions(const Relation& r, const std::vector<const Tuple*>& rows,
                                      const std::vector<std::size_t>& chosen, const ConstantSet& pool) {
  std::vector<Selection> conds;
  for (std::size_t b = 0; b < r.arity(); ++b) {
    Constant lo = (*rows[chosen.front()])[b], hi = lo;
    for (auto i : chosen) {
      lo = std::min(lo, (*rows[i])[b]);
      hi = std::max(hi, (*rows[i])[b]);
    }
    Constant cmin = (*rows.front())[b], cmax = cmin;
    for (const auto* t : rows) {
      cmin = std::min(cmin, (*t)[b]);
      cmax = std::max(cmax, (*t)[b]);
    }
    if (lo == hi && !(lo == cmin && hi == cmax)) {
      if (pool.count(lo)) conds.push_back({b, r.attributes[b], CompareOp::Eq, lo});
      continue;
    }
    if (lo != cmin && pool.count(lo)) conds.push_back({b, r.attributes[b], CompareOp::Ge, lo});
    if (hi != cmax && pool.count(hi)) conds.push_back({b, r.attributes[b], CompareOp::Le, hi});
  }
  std::sort(conds.begin(), conds.end(), [](const Selection& a, const Selection& b) { return compare(a, b) < 0; });
  const RowSet target = select_rows(rows, conds);
  for (std::size_t i = 0; i < conds.size();) {
    auto trial = conds;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (select_rows(rows, trial) == target) conds = std::move(trial);
    else ++i;
  }
  return conds;
}

}  // namespace

Concept lub_with_selections(const Instance& inst, const ConstantSet& x, const ConstantSet& pool,
                            std::size_t budget) {
  require_nonempty(x);
  struct Candidate {
    Concept concept_value;
    Extension ext;
  };
  std::vector<Candidate> cands;
  std::size_t visited = 0;
  for (const auto& r : inst.schema().relations()) {
    std::vector<const Tuple*> rows;
    for (const auto& t : inst.tuples(r.name)) rows.push_back(&t);
    for (std::size_t a = 0; a < r.arity(); ++a) {
      // Witness rows per constant of x.
      std::vector<std::vector<std::size_t>> witnesses;
      for (const auto& c : x) {
        witnesses.emplace_back();
        for (std::size_t i = 0; i < rows.size(); ++i)
          if ((*rows[i])[a] == c) witnesses.back().push_back(i);
        if (witnesses.back().empty()) break;
      }
      if (witnesses.size() != x.size() || witnesses.back().empty()) continue;
      std::set<std::vector<Selection>, std::function<bool(const std::vector<Selection>&,
                                                          const std::vector<Selection>&)>>
          seen([](const auto& p, const auto& q) {
            return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end(),
                                                [](const Selection& s, const Selection& t) { return compare(s, t) < 0; });
          });
      std::vector<std::size_t> pick(witnesses.size(), 0);
      for (;;) {
        if (++visited > budget) throw BudgetExceeded("least upper bound search exceeded the budget");
        std::vector<std::size_t> chosen;
        for (std::size_t k = 0; k < pick.size(); ++k) chosen.push_back(witnesses[k][pick[k]]);
        auto conds = box_conditions(r, rows, chosen, pool);
        if (seen.insert(conds).second) {
          Concept c(AtomicConcept{Projection{r.name, a, r.attributes[a], conds}});
          auto e = extension(c, inst);
          cands.push_back({std::move(c), std::move(e)});
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == witnesses[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
  }
  std::vector<AtomicConcept> parts;
  if (x.size() == 1) parts.push_back(Nominal{*x.begin()});
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& p, const Candidate& q) { return p.concept_value < q.concept_value; });
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cands.size() && !dominated; ++j) {
      if (i == j || !cands[j].ext.subset_of(cands[i].ext)) continue;
      // Strictly smaller, or equal and earlier in canonical order.
      dominated = !(cands[j].ext == cands[i].ext) || j < i;
    }
    if (!dominated) parts.push_back(cands[i].concept_value.conjuncts().front());
  }
  if (parts.empty()) return Concept::top();
  return Concept(std::move(parts));
}

Concept lub(const Instance& inst, const ConstantSet& x, Fragment f, const ConstantSet& pool) {
  switch (f) {
    case Fragment::SelectionFree: return lub_selection_free(inst, x);
    case Fragment::Full: return lub_with_selections(inst, x, pool);
    default:
      throw Error(std::string("least upper bounds need a fragment closed under intersection, not ") +
                  to_string(f));
  }
}

ConceptExplanation incremental_mge(const WhyNotInstance& w, Fragment f) {
  const auto& inst = w.instance();
  const auto& adom = inst.active_domain();
  std::vector<ConstantSet> support;
  ConceptExplanation e;
  for (const auto& a : w.missing()) {
    support.push_back({a});
    e.push_back(lub(inst, support.back(), f, w.pool()));
  }
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (const auto& b : adom) {
      if (extension(e[j], inst).contains(b)) continue;
      auto grown = support[j];
      grown.insert(b);
      auto trial = e;
      trial[j] = lub(inst, grown, f, w.pool());
      if (is_explanation(trial, w)) {
        e = std::move(trial);
        support[j] = std::move(grown);
      }
    }
    // A concept covering all of adom is outdone by ⊤, which no answer can tell apart.
    auto ext = extension(e[j], inst);
    if (!ext.all && std::includes(ext.members.begin(), ext.members.end(), adom.begin(), adom.end()))
      e[j] = Concept::top();
  }
  return e;
}

bool check_mge_instance(const WhyNotInstance& w, const ConceptExplanation& e, Fragment f) {
  if (e.size() != w.arity()) throw SchemaError("explanation arity differs from the query arity");
  const auto& inst = w.instance();
  auto exts = extensions_of(e, inst);
  if (!is_explanation(exts, w)) return false;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (exts[j].all) continue;
    auto trial = exts;
    trial[j] = Extension::everything();
    if (is_explanation(trial, w)) return false;
    for (const auto& b : inst.active_domain()) {
      if (exts[j].contains(b)) continue;
      auto grown = exts[j].members;
      grown.insert(b);
      trial[j] = extension(lub(inst, grown, f, w.pool()), inst);
      if (is_explanation(trial, w)) return false;
    }
  }
  return true;
}

ConceptOntology schema_candidates(const WhyNotInstance& w, Fragment f, std::size_t budget) {
  if (f != Fragment::Minimal && f != Fragment::SelectionFree)
    throw Error(std::string("schema-level explanations support the minimal and selection-free fragments, not ") +
                to_string(f));
  const auto& inst = w.instance();
  const auto& schema = inst.schema();
  if (schema.constraint_class() == ConstraintClass::Other) subsumed_by_schema(Concept::top(), Concept::top(), schema);
  // Only concepts containing the missing constant can appear at its position.
  std::vector<Concept> all{Concept::top()};
  for (const auto& a : w.missing()) {
    std::vector<AtomicConcept> atoms;
    for (const auto& r : schema.relations()) {
      const auto& ts = inst.tuples(r.name);
      for (std::size_t k = 0; k < r.arity(); ++k)
        if (column(ts, k).count(a)) atoms.push_back(Projection{r.name, k, r.attributes[k], {}});
    }
    all.push_back(Concept::nominal(a));
    if (f == Fragment::Minimal) {
      for (auto& p : atoms) all.emplace_back(p);
      continue;
    }
    if (atoms.size() >= 63 || (std::size_t{2} << atoms.size()) > budget)
      throw BudgetExceeded("schema-level candidate universe exceeded the budget");
    for (std::size_t mask = 1; mask < (std::size_t{1} << atoms.size()); ++mask) {
      std::vector<AtomicConcept> parts;
      for (std::size_t k = 0; k < atoms.size(); ++k)
        if (mask >> k & 1) parts.push_back(atoms[k]);
      all.emplace_back(parts);
      parts.push_back(Nominal{a});
      all.emplace_back(std::move(parts));
    }
  }
  if (all.size() > budget) throw BudgetExceeded("schema-level candidate universe exceeded the budget");
  return ConceptOntology::schema_order(std::move(all), schema);
}

std::vector<ConceptExplanation> compute_mge_schema(const WhyNotInstance& w, Fragment f, std::size_t budget) {
  auto onto = schema_candidates(w, f, budget);
  std::vector<ConceptExplanation> out;
  for (const auto& e : exhaustive_mge(w, onto)) {
    ConceptExplanation ce;
    for (auto i : e) ce.push_back(onto.concept_at(i));
    out.push_back(std::move(ce));
  }
  return out;
}

}  // namespace whynot
