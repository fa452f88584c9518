#include "whynot/evaluate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace whynot {

namespace {

const TupleSet& lookup(const Database& db, const std::string& name) {
  auto it = db.find(name);
  if (it == db.end()) throw SchemaError("unknown relation '" + name + "'");
  return it->second;
}

struct CompiledQuery {
  std::map<std::string, int> ids;
  std::vector<std::vector<std::pair<CompareOp, Constant>>> cmps;
  std::vector<std::optional<Constant>> pinned;
  bool contradictory = false;

  int id(const std::string& v) {
    auto [it, fresh] = ids.emplace(v, static_cast<int>(ids.size()));
    if (fresh) {
      cmps.emplace_back();
      pinned.emplace_back();
    }
    return it->second;
  }

  bool passes(int v, const Constant& c) const {
    for (const auto& [op, bound] : cmps[v])
      if (!satisfies(c, op, bound)) return false;
    return true;
  }
};

}  // namespace

TupleSet evaluate(const ConjunctiveQuery& q, const Database& db) {
  check_safe(q);
  CompiledQuery cq;
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (is_variable(t)) cq.id(var_name(t));
  for (const auto& h : q.head) cq.id(h);
  for (const auto& c : q.comparisons) {
    int v = cq.id(c.variable);
    cq.cmps[v].emplace_back(c.op, c.value);
    if (c.op == CompareOp::Eq) {
      if (cq.pinned[v] && *cq.pinned[v] != c.value) return {};
      cq.pinned[v] = c.value;
    }
  }

  // Columns of the running binding table, as variable ids.
  std::vector<int> columns;
  std::vector<int> col_of(cq.ids.size(), -1);
  std::vector<Tuple> rows(1);
  for (std::size_t v = 0; v < cq.pinned.size(); ++v)
    if (cq.pinned[v]) {
      if (!cq.passes(static_cast<int>(v), *cq.pinned[v])) return {};
      col_of[v] = static_cast<int>(columns.size());
      columns.push_back(static_cast<int>(v));
      rows[0].push_back(*cq.pinned[v]);
    }

  std::vector<const TupleSet*> extents;
  for (const auto& a : q.atoms) {
    extents.push_back(&lookup(db, a.relation));
    if (!extents.back()->empty() && extents.back()->begin()->size() != a.args.size())
      throw SchemaError("atom " + to_string(a) + " does not match the arity of " + a.relation);
  }

  std::vector<bool> done(q.atoms.size(), false);
  for (std::size_t step = 0; step < q.atoms.size(); ++step) {
    // Next atom: connected to bound variables if possible, then smallest extent.
    std::size_t best = q.atoms.size();
    bool best_conn = false;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      if (done[i]) continue;
      bool conn = false;
      for (const auto& t : q.atoms[i].args)
        if (is_variable(t) && col_of[cq.ids[var_name(t)]] >= 0) conn = true;
      if (best == q.atoms.size() || (conn && !best_conn) ||
          (conn == best_conn && extents[i]->size() < extents[best]->size())) {
        best = i;
        best_conn = conn;
      }
    }
    done[best] = true;
    const Atom& atom = q.atoms[best];

    std::vector<std::size_t> key_pos;  // atom positions holding already-bound variables
    std::vector<int> key_cols;
    std::vector<std::pair<std::size_t, int>> new_vars;  // first occurrence in this atom
    std::vector<std::pair<std::size_t, std::size_t>> same;  // repeated variable within the atom
    std::map<int, std::size_t> first_pos;
    for (std::size_t p = 0; p < atom.args.size(); ++p) {
      const auto& t = atom.args[p];
      if (!is_variable(t)) continue;
      int v = cq.ids[var_name(t)];
      if (col_of[v] >= 0) {
        key_pos.push_back(p);
        key_cols.push_back(col_of[v]);
      } else if (auto it = first_pos.find(v); it != first_pos.end()) {
        same.emplace_back(it->second, p);
      } else {
        first_pos[v] = p;
        new_vars.emplace_back(p, v);
      }
    }

    std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash> index;
    for (const auto& t : *extents[best]) {
      bool ok = true;
      for (std::size_t p = 0; ok && p < atom.args.size(); ++p)
        if (!is_variable(atom.args[p]) && t[p] != const_value(atom.args[p])) ok = false;
      for (const auto& [a, b] : same)
        if (ok && t[a] != t[b]) ok = false;
      for (const auto& [p, v] : new_vars)
        if (ok && !cq.passes(v, t[p])) ok = false;
      if (!ok) continue;
      Tuple key;
      key.reserve(key_pos.size());
      for (auto p : key_pos) key.push_back(t[p]);
      index[std::move(key)].push_back(&t);
    }

    std::vector<Tuple> next;
    Tuple key;
    for (const auto& row : rows) {
      key.clear();
      for (auto c : key_cols) key.push_back(row[c]);
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (const Tuple* t : it->second) {
        Tuple r = row;
        for (const auto& [p, v] : new_vars) r.push_back((*t)[p]);
        next.push_back(std::move(r));
      }
    }
    for (const auto& [p, v] : new_vars) {
      col_of[v] = static_cast<int>(columns.size());
      columns.push_back(v);
    }
    rows = std::move(next);
    if (rows.empty()) return {};
  }

  TupleSet out;
  for (const auto& row : rows) {
    Tuple t;
    t.reserve(q.head.size());
    for (const auto& h : q.head) t.push_back(row[col_of[cq.ids[h]]]);
    out.insert(std::move(t));
  }
  return out;
}

TupleSet evaluate(const UnionQuery& q, const Database& db) {
  TupleSet out;
  for (const auto& d : q.disjuncts) {
    auto part = evaluate(d, db);
    out.insert(part.begin(), part.end());
  }
  return out;
}

TupleSet evaluate(const ConjunctiveQuery& q, const Instance& inst) {
  inst.schema().check_query(q);
  return evaluate(q, inst.data());
}

TupleSet evaluate(const UnionQuery& q, const Instance& inst) {
  inst.schema().check_query(q);
  return evaluate(q, inst.data());
}

// ---------------------------------------------------------------------------
// View unfolding

namespace {

void collect_vars(const ConjunctiveQuery& q, std::set<std::string>& out) {
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (is_variable(t)) out.insert(var_name(t));
  for (const auto& c : q.comparisons) out.insert(c.variable);
  out.insert(q.head.begin(), q.head.end());
}

void unfold_into(const ConjunctiveQuery& cq, const Schema& schema, std::size_t& fresh,
                 std::vector<ConjunctiveQuery>& out) {
  std::size_t k = 0;
  while (k < cq.atoms.size() && !schema.is_view(cq.atoms[k].relation)) ++k;
  if (k == cq.atoms.size()) {
    out.push_back(cq);
    return;
  }
  const Atom& atom = cq.atoms[k];
  const auto* def = schema.view_definition(atom.relation);
  for (const auto& d : def->body.disjuncts) {
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < d.head.size(); ++i) sub[d.head[i]] = atom.args[i];
    std::set<std::string> vars;
    collect_vars(d, vars);
    for (const auto& v : vars)
      if (!sub.count(v)) sub[v] = Variable{"u#" + std::to_string(fresh++)};

    ConjunctiveQuery next;
    next.head = cq.head;
    next.comparisons = cq.comparisons;
    for (std::size_t i = 0; i < cq.atoms.size(); ++i)
      if (i != k) next.atoms.push_back(cq.atoms[i]);
    for (const auto& a : d.atoms) {
      Atom b{a.relation, {}};
      for (const auto& t : a.args) b.args.push_back(is_variable(t) ? sub.at(var_name(t)) : t);
      next.atoms.push_back(std::move(b));
    }
    bool feasible = true;
    for (const auto& c : d.comparisons) {
      const Term& t = sub.at(c.variable);
      if (is_variable(t)) next.comparisons.push_back({var_name(t), c.op, c.value});
      else if (!satisfies(const_value(t), c.op, c.value)) feasible = false;
    }
    if (feasible) unfold_into(next, schema, fresh, out);
  }
}

}  // namespace

UnionQuery unfold_views(const UnionQuery& q, const Schema& schema) {
  UnionQuery out;
  out.name = q.name;
  std::size_t fresh = 0;
  for (const auto& d : q.disjuncts) unfold_into(d, schema, fresh, out.disjuncts);
  return out;
}

// ---------------------------------------------------------------------------
// Containment

CanonicalInstance freeze(const ConjunctiveQuery& q) {
  CanonicalInstance ci;
  std::map<std::string, Constant> pinned;
  for (const auto& c : q.comparisons)
    if (c.op == CompareOp::Eq) {
      auto [it, fresh] = pinned.emplace(c.variable, c.value);
      if (!fresh && it->second != c.value) ci.unsatisfiable = true;
    }
  for (const auto& c : q.comparisons) {
    if (auto it = pinned.find(c.variable); it != pinned.end()) {
      if (!satisfies(it->second, c.op, c.value)) ci.unsatisfiable = true;
      continue;
    }
    auto& b = ci.bounds[c.variable];
    bool lower = c.op == CompareOp::Gt || c.op == CompareOp::Ge;
    bool strict = c.op == CompareOp::Gt || c.op == CompareOp::Lt;
    if (lower) {
      if (!b.has_lo || c.value > b.lo || (c.value == b.lo && strict)) {
        b.lo = c.value;
        b.lo_strict = strict;
      }
      b.has_lo = true;
    } else {
      if (!b.has_hi || c.value < b.hi || (c.value == b.hi && strict)) {
        b.hi = c.value;
        b.hi_strict = strict;
      }
      b.has_hi = true;
    }
  }
  for (auto it = ci.bounds.begin(); it != ci.bounds.end();) {
    const auto& b = it->second;
    if (b.has_lo && b.has_hi) {
      if (b.lo > b.hi || (b.lo == b.hi && (b.lo_strict || b.hi_strict))) ci.unsatisfiable = true;
      if (b.lo == b.hi && !b.lo_strict && !b.hi_strict) {
        pinned.emplace(it->first, b.lo);
        it = ci.bounds.erase(it);
        continue;
      }
    }
    ++it;
  }
  auto subst = [&](const Term& t) -> Term {
    if (is_variable(t))
      if (auto it = pinned.find(var_name(t)); it != pinned.end()) return it->second;
    return t;
  };
  for (const auto& h : q.head) ci.head.push_back(subst(Variable{h}));
  for (const auto& a : q.atoms) {
    Atom b{a.relation, {}};
    for (const auto& t : a.args) b.args.push_back(subst(t));
    ci.atoms.push_back(std::move(b));
  }
  return ci;
}

namespace {

bool implied(const CanonicalInstance::Bound* b, CompareOp op, const Constant& c) {
  if (!b) return false;
  switch (op) {
    case CompareOp::Eq: return false;
    case CompareOp::Lt: return b->has_hi && (b->hi < c || (b->hi == c && b->hi_strict));
    case CompareOp::Le: return b->has_hi && b->hi <= c;
    case CompareOp::Gt: return b->has_lo && (b->lo > c || (b->lo == c && b->lo_strict));
    case CompareOp::Ge: return b->has_lo && b->lo >= c;
  }
  return false;
}

struct Matcher {
  const ConjunctiveQuery& q;
  const CanonicalInstance& target;
  std::map<std::string, std::vector<const Comparison*>> cmps;
  std::map<std::string, Term> h;

  bool comparisons_ok(const std::string& v, const Term& t) const {
    auto it = cmps.find(v);
    if (it == cmps.end()) return true;
    for (const auto* c : it->second) {
      if (!is_variable(t)) {
        if (!satisfies(const_value(t), c->op, c->value)) return false;
      } else {
        auto bt = target.bounds.find(var_name(t));
        if (!implied(bt == target.bounds.end() ? nullptr : &bt->second, c->op, c->value))
          return false;
      }
    }
    return true;
  }

  bool bind(const std::string& v, const Term& t, std::vector<std::string>& trail) {
    auto it = h.find(v);
    if (it != h.end()) return it->second == t;
    if (!comparisons_ok(v, t)) return false;
    h.emplace(v, t);
    trail.push_back(v);
    return true;
  }

  bool search(std::size_t i) {
    if (i == q.atoms.size()) return true;
    const Atom& a = q.atoms[i];
    for (const auto& b : target.atoms) {
      if (b.relation != a.relation || b.args.size() != a.args.size()) continue;
      std::vector<std::string> trail;
      bool ok = true;
      for (std::size_t p = 0; ok && p < a.args.size(); ++p) {
        if (is_variable(a.args[p])) ok = bind(var_name(a.args[p]), b.args[p], trail);
        else ok = a.args[p] == b.args[p];
      }
      if (ok && search(i + 1)) return true;
      for (const auto& v : trail) h.erase(v);
    }
    return false;
  }
};

}  // namespace

bool maps_into(const ConjunctiveQuery& q, const CanonicalInstance& target) {
  if (q.head.size() != target.head.size()) return false;
  Matcher m{q, target, {}, {}};
  for (const auto& c : q.comparisons) m.cmps[c.variable].push_back(&c);
  std::vector<std::string> trail;
  for (std::size_t i = 0; i < q.head.size(); ++i)
    if (!m.bind(q.head[i], target.head[i], trail)) return false;

  // Variables outside the head and the atoms are pinned by equalities; they
  // only constrain satisfiability.
  std::set<std::string> in_atoms;
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (is_variable(t)) in_atoms.insert(var_name(t));
  for (const auto& [v, cs] : m.cmps) {
    if (m.h.count(v) || in_atoms.count(v)) continue;
    std::optional<Constant> pin;
    for (const auto* c : cs)
      if (c->op == CompareOp::Eq) pin = c->value;
    if (!pin || !m.comparisons_ok(v, *pin)) return false;
  }

  // Match atoms with the fewest candidate targets first.
  ConjunctiveQuery sorted = q;
  std::map<std::string, std::size_t> counts;
  for (const auto& b : target.atoms) ++counts[b.relation];
  std::stable_sort(sorted.atoms.begin(), sorted.atoms.end(),
                   [&](const Atom& x, const Atom& y) { return counts[x.relation] < counts[y.relation]; });
  Matcher ms{sorted, target, {}, m.h};
  for (const auto& c : sorted.comparisons) ms.cmps[c.variable].push_back(&c);
  return ms.search(0);
}

bool contains(const UnionQuery& q1, const UnionQuery& q2) {
  for (const auto& d1 : q1.disjuncts) {
    auto frozen = freeze(d1);
    if (frozen.unsatisfiable) continue;
    bool found = false;
    for (const auto& d2 : q2.disjuncts)
      if (maps_into(d2, frozen)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Chase

ChaseResult chase(std::vector<Atom> facts, const std::vector<const InclusionDependency*>& ids,
                  const Schema& schema, std::size_t max_rounds) {
  std::size_t next_null = 0;
  for (const auto& f : facts)
    for (const auto& t : f.args)
      if (is_variable(t) && var_name(t).rfind("n#", 0) == 0)
        next_null = std::max<std::size_t>(next_null, std::stoul(var_name(t).substr(2)) + 1);

  auto project = [](const Atom& a, const std::vector<std::size_t>& ps) {
    std::vector<Term> out;
    for (auto p : ps) out.push_back(a.args[p]);
    return out;
  };
  // Per ID, the projections already present in the target relation.
  std::vector<std::set<std::vector<Term>>> present(ids.size());
  auto record = [&](const Atom& f) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i]->to == f.relation) present[i].insert(project(f, ids[i]->to_positions));
  };
  std::set<Atom> seen;
  std::vector<Atom> unique;
  for (auto& f : facts)
    if (seen.insert(f).second) {
      record(f);
      unique.push_back(std::move(f));
    }
  ChaseResult res;
  res.facts = std::move(unique);

  for (std::size_t round = 0;; ++round) {
    std::vector<Atom> added;
    std::size_t snapshot = res.facts.size();
    for (std::size_t fi = 0; fi < snapshot; ++fi) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const Atom& f = res.facts[fi];
        if (f.relation != ids[i]->from) continue;
        auto key = project(f, ids[i]->from_positions);
        if (present[i].count(key)) continue;
        if (round >= max_rounds) {
          res.rounds = round;
          res.fixpoint = false;
          return res;
        }
        const auto& target = schema.relation(ids[i]->to);
        Atom g{target.name, std::vector<Term>(target.arity())};
        std::vector<bool> set(target.arity(), false);
        for (std::size_t k = 0; k < key.size(); ++k) {
          g.args[ids[i]->to_positions[k]] = key[k];
          set[ids[i]->to_positions[k]] = true;
        }
        for (std::size_t p = 0; p < g.args.size(); ++p)
          if (!set[p]) g.args[p] = Variable{"n#" + std::to_string(next_null++)};
        record(g);
        if (seen.insert(g).second) added.push_back(std::move(g));
      }
    }
    if (added.empty()) {
      res.rounds = round;
      res.fixpoint = true;
      return res;
    }
    for (auto& g : added) res.facts.push_back(std::move(g));
  }
}

}  // namespace whynot
