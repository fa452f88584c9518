#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "whynot/concept.hpp"
#include "whynot/instance.hpp"
#include "whynot/ontology.hpp"
#include "whynot/query.hpp"

namespace whynot {

// (instance, query, answers, missing tuple).  The missing tuple is never an
// answer.
class WhyNotInstance {
 public:
  // Computes the answers when `ans` is absent.  A supplied answer set is
  // re-checked unless `trusted`.  Throws SchemaError on arity mismatch,
  // TuplePresent when the tuple is an answer.
  static WhyNotInstance create(Instance instance, UnionQuery query, Tuple missing,
                               std::optional<TupleSet> ans = std::nullopt, bool trusted = false);

  const Instance& instance() const { return instance_; }
  const UnionQuery& query() const { return query_; }
  const TupleSet& answers() const { return ans_; }
  const Tuple& missing() const { return missing_; }
  std::size_t arity() const { return missing_.size(); }
  // adom(I) plus the missing tuple's constants.
  const ConstantSet& pool() const { return pool_; }

 private:
  WhyNotInstance(Instance i) : instance_(std::move(i)) {}  // NOLINT
  Instance instance_;
  UnionQuery query_;
  TupleSet ans_;
  Tuple missing_;
  ConstantSet pool_;
};

// Concept indices into a finite ontology, one per position.
using Explanation = std::vector<std::size_t>;
using ConceptExplanation = std::vector<Concept>;

enum class Generality { Less, Greater, Equivalent, Incomparable };
const char* to_string(Generality g);

// Each missing constant lies in its extension and no answer lies in the
// product.  Answers are tested one by one; the product is never built.
bool is_explanation(const std::vector<Extension>& exts, const WhyNotInstance& w);
bool is_explanation(const Explanation& e, const WhyNotInstance& w, const FiniteOntology& o);
bool is_explanation(const ConceptExplanation& e, const WhyNotInstance& w);

Generality compare_generality(const Explanation& e1, const Explanation& e2, const FiniteOntology& o);
// Ordered by extensions on the instance.
Generality compare_generality(const ConceptExplanation& e1, const ConceptExplanation& e2,
                              const Instance& inst);
// Ordered by subsumption over all instances of the schema.
Generality compare_generality_schema(const ConceptExplanation& e1, const ConceptExplanation& e2,
                                     const Schema& schema);

// Every explanation built from the ontology, in lexicographic index order.
// Throws BudgetExceeded past `budget` candidate tuples.
std::vector<Explanation> all_explanations(const WhyNotInstance& w, const FiniteOntology& o,
                                          std::size_t budget = 10'000'000);

// All most-general explanations, one per equivalence class (the
// lexicographically smallest index tuple).
std::vector<Explanation> exhaustive_mge(const WhyNotInstance& w, const FiniteOntology& o,
                                        std::size_t budget = 10'000'000);

// False for an empty missing tuple.
bool exists_explanation(const WhyNotInstance& w, const FiniteOntology& o,
                        std::size_t budget = 10'000'000);

// `e` is an explanation and no single position can be replaced by a strictly
// more general concept.
bool check_mge(const WhyNotInstance& w, const FiniteOntology& o, const Explanation& e);

// Smallest selection-free concept whose extension contains `x`: every
// projection containing it, plus the nominal for a singleton, else ⊤.
Concept lub_selection_free(const Instance& inst, const ConstantSet& x);

// As above, with selections whose constants come from `pool`.  Keeps the
// extension-minimal candidates.  Throws BudgetExceeded past `budget` witness
// row combinations.
Concept lub_with_selections(const Instance& inst, const ConstantSet& x, const ConstantSet& pool,
                            std::size_t budget = 1'000'000);

// SelectionFree and Full only.
Concept lub(const Instance& inst, const ConstantSet& x, Fragment f, const ConstantSet& pool);

// Greedy generalization, position by position, constants in ascending order.
ConceptExplanation incremental_mge(const WhyNotInstance& w, Fragment f);

// Most-general w.r.t. the instance-derived ontology of the fragment.
bool check_mge_instance(const WhyNotInstance& w, const ConceptExplanation& e, Fragment f);

// Most-general explanations w.r.t. subsumption over all instances of the
// schema, for the minimal or selection-free fragment over adom plus the
// missing constants.  Throws UnsupportedConstraintClass, BudgetExceeded.
std::vector<ConceptExplanation> compute_mge_schema(const WhyNotInstance& w, Fragment f,
                                                   std::size_t budget = 100'000);

// The schema-level candidate universe used by compute_mge_schema.
ConceptOntology schema_candidates(const WhyNotInstance& w, Fragment f, std::size_t budget = 100'000);

// Sum of concept lengths.
std::size_t explanation_length(const Explanation& e, const FiniteOntology& o);
std::size_t explanation_length(const ConceptExplanation& e);

// A most-general explanation of least total length; ties go to the smallest
// index tuple.  Brute force.
std::optional<Explanation> shortest_mge(const WhyNotInstance& w, const FiniteOntology& o,
                                        std::size_t budget = 10'000'000);

// Sum of extension sizes; nullopt when some extension is the whole domain.
std::optional<std::size_t> degree_of_generality(const std::vector<Extension>& exts);

// An explanation of greatest degree; an unbounded degree beats every finite
// one and ties go to the smallest index tuple.  Brute force.
std::optional<Explanation> card_maximal_explanation(const WhyNotInstance& w, const FiniteOntology& o,
                                                    std::size_t budget = 10'000'000);

// Componentwise irredundant form.
ConceptExplanation minimize_explanation(const ConceptExplanation& e, const Instance& inst);

// Per component, searches conjunctions of atomic concepts with the same
// extension that are shorter than the irredundant form.  Visits at most
// `budget` conjunctions per component and keeps the best found.
ConceptExplanation minimize_equivalent_length(const ConceptExplanation& e, const Instance& inst,
                                              std::size_t budget = 200'000);
Concept minimize_equivalent_length(const Concept& c, const Instance& inst, std::size_t budget = 200'000);

// JSON report: {"explanations":[{"concepts":[..],"extensions":[[..]|"*"]}],
//               "generality":[{"left":i,"right":j,"relation":"greater"}]}
struct ExplanationReport {
  std::vector<std::vector<std::string>> concepts;
  std::vector<std::vector<Extension>> extensions;
  struct Relation {
    std::size_t left, right;
    Generality relation;
  };
  std::vector<Relation> generality;
};
std::string to_json(const ExplanationReport& r, int indent = 2);

}  // namespace whynot
