#include "whynot/concept.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"

namespace whynot {

namespace {

[[noreturn]] void unsupported(const Schema& schema, const std::string& why) {
  std::string msg = "schema-level subsumption is not supported " + why + ":";
  bool has_fd = !schema.fds().empty();
  for (const auto& c : schema.constraints())
    if (!has_fd || std::holds_alternative<FunctionalDependency>(c))
      msg += " [" + describe(c, schema) + "]";
  throw UnsupportedConstraintClass(msg);
}

void check_class(const Schema& schema, ConstraintClass cls, const Concept& c1, const Concept& c2) {
  if (cls == ConstraintClass::Other) {
    if (!schema.fds().empty()) unsupported(schema, "with functional dependencies");
    unsupported(schema, "with inclusion dependencies and views together");
  }
  if (cls == ConstraintClass::IdsOnly && (!c1.selection_free() || !c2.selection_free()))
    unsupported(schema, "for concepts with selections under inclusion dependencies");
}

// Canonical database of `c` chased with the schema's IDs.  Every fact the chase
// can put the frozen element into is produced within total-arity rounds, since
// each round moves it to a new (relation, position) pair; unary projections of
// that element are therefore decided even when the chase itself does not
// terminate.
CanonicalInstance chase_concept(const Concept& c, const Schema& schema) {
  auto frozen = freeze(concept_to_query(c, schema).disjuncts.front());
  if (frozen.unsatisfiable) return frozen;
  auto res = chase(frozen.atoms, schema.ids(), schema, std::max<std::size_t>(1, schema.total_arity()));
  frozen.atoms = std::move(res.facts);
  return frozen;
}

}  // namespace

bool subsumed_by_schema(const Concept& c1, const Concept& c2, const Schema& schema) {
  SchemaSubsumption s(schema);
  return s(c1, c2);
}

SchemaSubsumption::SchemaSubsumption(const Schema& schema)
    : schema_(schema), cls_(schema.constraint_class()) {}

const UnionQuery& SchemaSubsumption::query(const Concept& c) {
  auto it = queries_.find(c);
  if (it == queries_.end()) {
    auto q = concept_to_query(c, schema_);
    if (cls_ == ConstraintClass::ViewsOnly) q = unfold_views(q, schema_);
    it = queries_.emplace(c, std::move(q)).first;
  }
  return it->second;
}

const CanonicalInstance& SchemaSubsumption::chased(const Concept& c) {
  auto it = chased_.find(c);
  if (it == chased_.end()) it = chased_.emplace(c, chase_concept(c, schema_)).first;
  return it->second;
}

bool SchemaSubsumption::operator()(const Concept& c1, const Concept& c2) {
  check_class(schema_, cls_, c1, c2);
  if (c2.is_top() || c1 == c2) return true;
  if (cls_ == ConstraintClass::IdsOnly) {
    const auto& db = chased(c1);
    if (db.unsatisfiable) return true;
    return maps_into(query(c2).disjuncts.front(), db);
  }
  return contains(query(c1), query(c2));
}

}  // namespace whynot
