#pragma once

// Brute-force reference implementations.  They share no code paths with the
// library beyond the data types and the constant order.

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "whynot/concept.hpp"
#include "whynot/explain.hpp"
#include "whynot/ontology.hpp"
#include "whynot/query.hpp"

namespace whynot::testing {

inline bool op_holds(const Constant& v, CompareOp op, const Constant& c) {
  switch (op) {
    case CompareOp::Eq: return !(v < c) && !(c < v);
    case CompareOp::Lt: return v < c;
    case CompareOp::Gt: return c < v;
    case CompareOp::Le: return !(c < v);
    case CompareOp::Ge: return !(v < c);
  }
  return false;
}

// Every assignment of the query's variables to adom plus query constants.
inline TupleSet naive_eval(const ConjunctiveQuery& q, const Database& db) {
  ConstantSet domain;
  for (const auto& [_, ts] : db)
    for (const auto& t : ts) domain.insert(t.begin(), t.end());
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (!is_variable(t)) domain.insert(const_value(t));
  for (const auto& c : q.comparisons) domain.insert(c.value);
  std::vector<std::string> vars;
  auto add = [&](const std::string& v) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  };
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (is_variable(t)) add(var_name(t));
  for (const auto& h : q.head) add(h);
  for (const auto& c : q.comparisons) add(c.variable);
  std::vector<Constant> dom(domain.begin(), domain.end());
  std::map<std::string, Constant> asg;
  TupleSet out;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == vars.size()) {
      auto val = [&](const Term& t) { return is_variable(t) ? asg.at(var_name(t)) : const_value(t); };
      for (const auto& a : q.atoms) {
        Tuple t;
        for (const auto& x : a.args) t.push_back(val(x));
        auto it = db.find(a.relation);
        if (it == db.end() || !it->second.count(t)) return;
      }
      for (const auto& c : q.comparisons)
        if (!op_holds(asg.at(c.variable), c.op, c.value)) return;
      Tuple h;
      for (const auto& v : q.head) h.push_back(asg.at(v));
      out.insert(h);
      return;
    }
    for (const auto& c : dom) {
      asg[vars[k]] = c;
      go(k + 1);
    }
  };
  if (!dom.empty() || vars.empty()) go(0);
  return out;
}

inline TupleSet naive_eval(const UnionQuery& q, const Database& db) {
  TupleSet out;
  for (const auto& d : q.disjuncts) {
    auto r = naive_eval(d, db);
    out.insert(r.begin(), r.end());
  }
  return out;
}

// Comparison-free containment by enumerating every map from q2's variables
// into the terms of q1's canonical database.
inline bool homomorphism_contained(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  std::set<Term> targets;
  for (const auto& a : q1.atoms) targets.insert(a.args.begin(), a.args.end());
  std::vector<Term> tgt(targets.begin(), targets.end());
  std::vector<std::string> vars;
  for (const auto& a : q2.atoms)
    for (const auto& t : a.args)
      if (is_variable(t) && std::find(vars.begin(), vars.end(), var_name(t)) == vars.end())
        vars.push_back(var_name(t));
  std::set<Atom> facts(q1.atoms.begin(), q1.atoms.end());
  std::map<std::string, Term> h;
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == vars.size()) {
      for (std::size_t i = 0; i < q2.head.size(); ++i)
        if (!(h.at(q2.head[i]) == Term(Variable{q1.head[i]}))) return false;
      for (const auto& a : q2.atoms) {
        Atom img{a.relation, {}};
        for (const auto& t : a.args) img.args.push_back(is_variable(t) ? h.at(var_name(t)) : t);
        if (!facts.count(img)) return false;
      }
      return true;
    }
    for (const auto& t : tgt) {
      h[vars[k]] = t;
      if (go(k + 1)) return true;
    }
    return false;
  };
  return go(0);
}

// Extensions as (all, members) keys.
using ExtKey = std::pair<bool, ConstantSet>;

inline ExtKey key(const Extension& e) { return {e.all, e.members}; }

inline bool key_subset(const ExtKey& a, const ExtKey& b) {
  if (b.first) return true;
  if (a.first) return false;
  return std::includes(b.second.begin(), b.second.end(), a.second.begin(), a.second.end());
}

inline ExtKey key_meet(const ExtKey& a, const ExtKey& b) {
  if (a.first) return b;
  if (b.first) return a;
  ConstantSet out;
  std::set_intersection(a.second.begin(), a.second.end(), b.second.begin(), b.second.end(),
                        std::inserter(out, out.end()));
  return {false, out};
}

// Every extension the fragment over `pool` can define on `db`.  Row sets are
// the closure under intersection of all single conditions with all five
// operators and every pool constant.
inline std::set<ExtKey> definable_extensions(const Schema& s, const Database& db, const ConstantSet& pool, Fragment f) {
  std::set<ExtKey> atoms;
  atoms.insert({true, {}});
  for (const auto& c : pool) atoms.insert({false, {c}});
  bool sel = f == Fragment::IntersectionFree || f == Fragment::Full;
  bool meet = f == Fragment::SelectionFree || f == Fragment::Full;
  for (const auto& r : s.relations()) {
    std::vector<Tuple> rows(db.at(r.name).begin(), db.at(r.name).end());
    std::set<std::vector<bool>> rowsets{std::vector<bool>(rows.size(), true)};
    if (sel) {
      std::vector<std::vector<bool>> singles;
      for (std::size_t b = 0; b < r.arity(); ++b)
        for (CompareOp op : {CompareOp::Eq, CompareOp::Lt, CompareOp::Gt, CompareOp::Le, CompareOp::Ge})
          for (const auto& c : pool) {
            std::vector<bool> rs(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) rs[i] = op_holds(rows[i][b], op, c);
            singles.push_back(rs);
          }
      bool grew = true;
      while (grew) {
        grew = false;
        auto snapshot = rowsets;
        for (const auto& x : snapshot)
          for (const auto& y : singles) {
            std::vector<bool> z(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) z[i] = x[i] && y[i];
            grew |= rowsets.insert(z).second;
          }
      }
    }
    for (const auto& rs : rowsets)
      for (std::size_t a = 0; a < r.arity(); ++a) {
        ConstantSet e;
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (rs[i]) e.insert(rows[i][a]);
        atoms.insert({false, e});
      }
  }
  if (!meet) return atoms;
  std::set<ExtKey> closed = atoms;
  bool grew = true;
  while (grew) {
    grew = false;
    auto snapshot = closed;
    for (const auto& x : snapshot)
      for (const auto& y : atoms) grew |= closed.insert(key_meet(x, y)).second;
  }
  return closed;
}

// Smallest definable extension containing x (the family is closed under
// intersection, so it is the meet of all containing ones).
inline ExtKey brute_lub(const std::set<ExtKey>& family, const ConstantSet& x) {
  ExtKey acc{true, {}};
  for (const auto& e : family)
    if (key_subset({false, x}, e)) acc = key_meet(acc, e);
  return acc;
}

// Explanation test with the product materialized.
inline bool brute_is_explanation(const std::vector<ExtKey>& exts, const Tuple& missing, const TupleSet& ans,
                                 const ConstantSet& domain) {
  for (std::size_t i = 0; i < exts.size(); ++i)
    if (!key_subset({false, {missing[i]}}, exts[i])) return false;
  // ⊤ stands for the whole domain; only constants that can occur in an
  // answer matter.
  std::vector<std::vector<Constant>> sides;
  for (const auto& e : exts) {
    const auto& src = e.first ? domain : e.second;
    sides.emplace_back(src.begin(), src.end());
  }
  TupleSet product{Tuple{}};
  for (const auto& side : sides) {
    TupleSet next;
    for (const auto& t : product)
      for (const auto& c : side) {
        auto u = t;
        u.push_back(c);
        next.insert(u);
      }
    product = std::move(next);
  }
  for (const auto& t : product)
    if (ans.count(t)) return false;
  return true;
}

inline ConstantSet answer_domain(const TupleSet& ans) {
  ConstantSet d;
  for (const auto& t : ans) d.insert(t.begin(), t.end());
  return d;
}

// All explanations over a finite ontology, by full product enumeration.
inline std::vector<Explanation> brute_explanations(const WhyNotInstance& w, const FiniteOntology& o) {
  std::vector<ExtKey> ext;
  for (std::size_t i = 0; i < o.size(); ++i) ext.push_back(key(o.extension(i, w.instance())));
  auto dom = answer_domain(w.answers());
  std::vector<Explanation> out;
  Explanation cur(w.arity());
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == w.arity()) {
      std::vector<ExtKey> xs;
      for (auto i : cur) xs.push_back(ext[i]);
      if (brute_is_explanation(xs, w.missing(), w.answers(), dom)) out.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c < o.size(); ++c) {
      cur[k] = c;
      go(k + 1);
    }
  };
  if (w.arity() > 0) go(0);
  return out;
}

inline bool leq(const Explanation& a, const Explanation& b, const FiniteOntology& o) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!o.subsumed(a[i], b[i])) return false;
  return true;
}

inline bool strictly_less(const Explanation& a, const Explanation& b, const FiniteOntology& o) {
  return leq(a, b, o) && !leq(b, a, o);
}

// Most-general explanations by pairwise comparison of all explanations.
inline std::vector<Explanation> brute_mges(const WhyNotInstance& w, const FiniteOntology& o) {
  auto all = brute_explanations(w, o);
  std::vector<Explanation> out;
  for (const auto& e : all)
    if (std::none_of(all.begin(), all.end(), [&](const Explanation& f) { return strictly_less(e, f, o); }))
      out.push_back(e);
  return out;
}

// Most-general w.r.t. the instance-derived ontology: no tuple of definable
// extensions, each a superset, one strictly, is an explanation.
inline bool brute_mge_instance(const WhyNotInstance& w, const std::vector<ExtKey>& exts,
                               const std::set<ExtKey>& family) {
  auto dom = answer_domain(w.answers());
  if (!brute_is_explanation(exts, w.missing(), w.answers(), dom)) return false;
  std::vector<std::vector<ExtKey>> ups(exts.size());
  for (std::size_t j = 0; j < exts.size(); ++j)
    for (const auto& f : family)
      if (key_subset(exts[j], f)) ups[j].push_back(f);
  std::vector<ExtKey> cur(exts.size());
  std::function<bool(std::size_t, bool)> found = [&](std::size_t j, bool strict) -> bool {
    if (j == exts.size()) return strict && brute_is_explanation(cur, w.missing(), w.answers(), dom);
    for (const auto& f : ups[j]) {
      cur[j] = f;
      if (found(j + 1, strict || f != exts[j])) return true;
    }
    return false;
  };
  return !found(0, false);
}

// No conjunct can be dropped without changing the extension.
inline bool irredundant(const Concept& c, const Database& db) {
  if (c.conjuncts().size() <= 1) return true;
  auto e = extension(c, db);
  for (std::size_t i = 0; i < c.conjuncts().size(); ++i) {
    std::vector<AtomicConcept> rest;
    for (std::size_t k = 0; k < c.conjuncts().size(); ++k)
      if (k != i) rest.push_back(c.conjuncts()[k]);
    if (extension(Concept(rest), db) == e) return false;
  }
  return true;
}

}  // namespace whynot::testing
