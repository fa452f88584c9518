#include <algorithm>
#include <map>
#include <set>

#include "whynot/concept.hpp"
#include "whynot/error.hpp"

namespace whynot {

Fragment parse_fragment(std::string_view name) {
  if (name == "minimal" || name == "min" || name == "L_min") return Fragment::Minimal;
  if (name == "selection-free") return Fragment::SelectionFree;
  if (name == "intersection-free") return Fragment::IntersectionFree;
  if (name == "full") return Fragment::Full;
  throw ParseError("unknown fragment '" + std::string(name) +
                   "' (minimal, selection-free, intersection-free, full)");
}

const char* to_string(Fragment f) {
  switch (f) {
    case Fragment::Minimal: return "minimal";
    case Fragment::SelectionFree: return "selection-free";
    case Fragment::IntersectionFree: return "intersection-free";
    case Fragment::Full: return "full";
  }
  return "?";
}

bool in_fragment(const Concept& c, Fragment f) {
  switch (f) {
    case Fragment::Minimal: return c.selection_free() && c.intersection_free();
    case Fragment::SelectionFree: return c.selection_free();
    case Fragment::IntersectionFree: return c.intersection_free();
    case Fragment::Full: return true;
  }
  return false;
}

namespace {

using RowSet = std::vector<bool>;

struct Realized {
  RowSet rows;
  std::vector<Selection> conditions;
};

// Every row subset of `r` definable by a conjunction of single-attribute
// conditions with pool constants.  Over a finite column, `A < c`, `A > c` and
// conditions on values absent from the column coincide with `<=`, `>=` or `=`
// at a column value, or select nothing; the closure under intersection of the
// {=, <=, >=} conditions therefore covers every definable subset except
// possibly the empty one, which is added explicitly.
std::vector<Realized> realizable_row_sets(const Relation& r, const TupleSet& ts,
                                          const ConstantSet& pool, std::size_t budget) {
  std::vector<const Tuple*> rows;
  for (const auto& t : ts) rows.push_back(&t);
  std::vector<Realized> singles;
  std::map<RowSet, std::size_t> index;
  std::vector<Realized> found;
  RowSet full(rows.size(), true);
  index[full] = SIZE_MAX;  // the unselected relation is already covered

  for (std::size_t a = 0; a < r.arity(); ++a) {
    ConstantSet column;
    for (const auto* t : rows) column.insert((*t)[a]);
    for (const auto& v : column) {
      if (!pool.count(v)) continue;
      for (CompareOp op : {CompareOp::Eq, CompareOp::Le, CompareOp::Ge}) {
        RowSet rs(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) rs[i] = satisfies((*rows[i])[a], op, v);
        singles.push_back({rs, {{a, r.attributes[a], op, v}}});
      }
    }
  }
  for (const auto& s : singles)
    if (index.emplace(s.rows, found.size()).second) found.push_back(s);

  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& s : singles) {
      RowSet rs(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) rs[k] = found[i].rows[k] && s.rows[k];
      if (index.count(rs)) continue;
      if (found.size() >= budget) throw BudgetExceeded("selection enumeration over " + r.name);
      Realized next{rs, found[i].conditions};
      next.conditions.push_back(s.conditions.front());
      index.emplace(rs, found.size());
      found.push_back(std::move(next));
    }
  }
  RowSet none(rows.size(), false);
  if (!rows.empty() && !index.count(none)) {
    ConstantSet column;
    for (const auto* t : rows) column.insert((*t)[0]);
    if (pool.count(*column.begin()))
      found.push_back({none, {{0, r.attributes[0], CompareOp::Lt, *column.begin()}}});
  }
  return found;
}

}  // namespace

std::vector<Concept> enumerate_atomic_concepts(Fragment f, const Schema& schema,
                                               const ConstantSet& pool, const Database& db,
                                               Dedup dedup, std::size_t budget) {
  std::vector<Concept> out;
  std::set<std::pair<bool, ConstantSet>> seen_ext;
  std::set<Concept> seen;
  auto emit = [&](Concept c) {
    if (dedup == Dedup::ByExtension) {
      auto e = extension(c, db);
      if (!seen_ext.emplace(e.all, std::move(e.members)).second) return;
    } else if (!seen.insert(c).second) {
      return;
    }
    if (out.size() >= budget) throw BudgetExceeded("concept enumeration exceeded the budget");
    out.push_back(std::move(c));
  };

  emit(Concept::top());
  for (const auto& k : pool) emit(Concept::nominal(k));
  for (const auto& r : schema.relations())
    for (std::size_t a = 0; a < r.arity(); ++a)
      emit(Concept(AtomicConcept{Projection{r.name, a, r.attributes[a], {}}}));
  if (!allows_selection(f)) return out;

  for (const auto& r : schema.relations()) {
    auto it = db.find(r.name);
    if (it == db.end()) throw SchemaError("unknown relation '" + r.name + "'");
    for (const auto& rs : realizable_row_sets(r, it->second, pool, budget))
      for (std::size_t a = 0; a < r.arity(); ++a)
        emit(Concept(AtomicConcept{Projection{r.name, a, r.attributes[a], rs.conditions}}));
  }
  return out;
}

ConjunctionClosure::ConjunctionClosure(std::vector<Concept> atoms, const Database& db,
                                       std::size_t max_conjuncts)
    : db_(db), max_conjuncts_(max_conjuncts) {
  for (auto& c : atoms) {
    auto e = extension(c, db_);
    if (known(e)) continue;
    Entry entry{std::move(c), std::move(e), 1};
    base_.push_back(entry);
    insert(std::move(entry));
  }
}

bool ConjunctionClosure::known(const Extension& e) const {
  return seen_.count({e.all, e.members}) > 0;
}

void ConjunctionClosure::insert(Entry e) {
  seen_.emplace(e.ext.all, e.ext.members);
  found_.push_back(std::move(e));
}

std::optional<Concept> ConjunctionClosure::next() {
  if (emit_ < found_.size()) return found_[emit_++].value;
  while (i_ < found_.size()) {
    while (j_ < base_.size()) {
      const Entry e = found_[i_];
      const Entry& b = base_[j_++];
      if (max_conjuncts_ && e.atoms + 1 > max_conjuncts_) break;
      auto ext = e.ext.intersect(b.ext);
      if (known(ext)) continue;
      insert({e.value.meet(b.value), std::move(ext), e.atoms + 1});
      return found_[emit_++].value;
    }
    ++i_;
    j_ = 0;
  }
  return std::nullopt;
}

std::vector<Concept> enumerate_concepts(Fragment f, const Schema& schema, const ConstantSet& pool,
                                        const Database& db, std::size_t budget) {
  auto atoms = enumerate_atomic_concepts(f, schema, pool, db, Dedup::ByExtension, budget);
  if (!allows_intersection(f)) return atoms;
  ConjunctionClosure closure(std::move(atoms), db);
  std::vector<Concept> out;
  while (auto c = closure.next()) {
    if (out.size() >= budget) throw BudgetExceeded("conjunction closure exceeded the budget");
    out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace whynot
