#pragma once

#include <cstddef>
#include <vector>

#include "whynot/instance.hpp"
#include "whynot/query.hpp"
#include "whynot/schema.hpp"

namespace whynot {

// Set-semantics answers.  Relations missing from `db` raise SchemaError.
TupleSet evaluate(const ConjunctiveQuery& q, const Database& db);
TupleSet evaluate(const UnionQuery& q, const Database& db);

// Checks the query against the instance's schema first.
TupleSet evaluate(const ConjunctiveQuery& q, const Instance& inst);
TupleSet evaluate(const UnionQuery& q, const Instance& inst);

// Replaces view atoms by their definitions until only base relations remain.
UnionQuery unfold_views(const UnionQuery& q, const Schema& schema);

// q1 ⊆ q2 on every database.  Both queries must be over base relations.
// Each disjunct of q1 is frozen into a canonical database whose variables carry
// comparison intervals; containment holds when some disjunct of q2 maps into it.
bool contains(const UnionQuery& q1, const UnionQuery& q2);

// Atoms whose variables act as labeled nulls.
struct ChaseResult {
  std::vector<Atom> facts;
  bool fixpoint = false;
  std::size_t rounds = 0;
};

// Restricted ID chase: a fact triggers an ID only when no existing target fact
// already matches.  Fresh nulls are variables named "n#<k>".
ChaseResult chase(std::vector<Atom> facts, const std::vector<const InclusionDependency*>& ids,
                  const Schema& schema, std::size_t max_rounds);

// A frozen conjunctive query: variables are treated as distinct labeled values
// subject to interval bounds.  `unsatisfiable` marks contradictory comparisons.
struct CanonicalInstance {
  std::vector<Term> head;
  std::vector<Atom> atoms;
  struct Bound {
    bool has_lo = false, lo_strict = false, has_hi = false, hi_strict = false;
    Constant lo, hi;
  };
  std::map<std::string, Bound> bounds;
  bool unsatisfiable = false;
};

CanonicalInstance freeze(const ConjunctiveQuery& q);

// Is there a homomorphism from `q` into `target` mapping q's head onto
// target's head and respecting q's comparisons?
bool maps_into(const ConjunctiveQuery& q, const CanonicalInstance& target);

}  // namespace whynot
