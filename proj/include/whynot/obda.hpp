#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "whynot/concept.hpp"
#include "whynot/instance.hpp"
#include "whynot/ontology.hpp"
#include "whynot/query.hpp"

namespace whynot {

// P or P⁻.
struct BasicRole {
  std::string name;
  bool inverse = false;
  friend auto operator<=>(const BasicRole&, const BasicRole&) = default;
  std::string str() const { return name + (inverse ? "-" : ""); }
};

// A, ∃P or ∃P⁻.
struct BasicConcept {
  std::string name;
  bool exists = false;
  bool inverse = false;
  friend auto operator<=>(const BasicConcept&, const BasicConcept&) = default;
  std::string str() const;
};

struct ConceptInclusion {
  BasicConcept lhs, rhs;
  bool negated = false;  // lhs ⊑ ¬rhs
};

struct RoleInclusion {
  BasicRole lhs, rhs;
  bool negated = false;
};

// A DL-Lite_R TBox with its subsumption closure precomputed.
class TBox {
 public:
  TBox() = default;
  TBox(std::vector<std::string> concepts, std::vector<std::string> roles,
       std::vector<ConceptInclusion> concept_axioms, std::vector<RoleInclusion> role_axioms);

  const std::vector<std::string>& concept_names() const { return concepts_; }
  const std::vector<std::string>& role_names() const { return roles_; }
  const std::vector<ConceptInclusion>& concept_axioms() const { return concept_axioms_; }
  const std::vector<RoleInclusion>& role_axioms() const { return role_axioms_; }

  // Declared atomic concepts, then ∃P / ∃P⁻ for each role where they occur in an axiom.
  const std::vector<BasicConcept>& universe() const { return universe_; }

  bool entails(const BasicConcept& sub, const BasicConcept& super) const;
  bool entails(const BasicRole& sub, const BasicRole& super) const;
  bool unsatisfiable(const BasicConcept& c) const;
  bool unsatisfiable(const BasicRole& r) const;

  // Parses "A", "exists P", "exists P-"; throws SchemaError for unknown names.
  BasicConcept parse_concept(std::string_view text) const;
  bool is_role(std::string_view name) const;

  // Internal node numbering, shared with saturation.
  std::size_t concept_node(const BasicConcept& c) const;
  std::size_t role_node(const BasicRole& r) const;
  std::size_t concept_nodes() const { return concepts_.size() + 2 * roles_.size(); }
  std::size_t role_nodes() const { return 2 * roles_.size(); }
  BasicConcept concept_of_node(std::size_t n) const;
  BasicRole role_of_node(std::size_t n) const;
  // reach[a][b]: node a ⊑ node b by positive axioms.
  const std::vector<std::vector<bool>>& concept_reach() const { return creach_; }
  const std::vector<std::vector<bool>>& role_reach() const { return rreach_; }

 private:
  std::vector<std::string> concepts_, roles_;
  std::map<std::string, std::size_t, std::less<>> cidx_, ridx_;
  std::vector<ConceptInclusion> concept_axioms_;
  std::vector<RoleInclusion> role_axioms_;
  std::vector<BasicConcept> universe_;
  std::vector<std::vector<bool>> creach_, rreach_;
  std::vector<bool> cunsat_, runsat_;
};

bool tbox_subsumption(const TBox& t, const BasicConcept& c1, const BasicConcept& c2);

// body → A(x) or body → P(x, y)
struct GavMapping {
  ConjunctiveQuery body;  // head = the mapped variables
  std::string target;
  bool role = false;
};

struct ObdaSpec {
  TBox tbox;
  std::shared_ptr<const Schema> schema;
  std::vector<GavMapping> mappings;
};

// JSON: {"concepts":[..], "roles":[..],
//        "axioms":[{"lhs":"A","rhs":"B"}, {"lhs":"A","rhs":"!B"}, {"lhs":"exists P-","rhs":"A"}],
//        "mappings":[{"body":"R(x,y)", "head":"A(x)"}]}
ObdaSpec load_obda(std::string_view json_text, std::shared_ptr<const Schema> schema);
ObdaSpec load_obda_file(const std::string& path, std::shared_ptr<const Schema> schema);

// Mapped ABox closed under the positive axioms.  B ⊑ ∃R marks members of B as
// members of ∃R without inventing witnesses.
struct Saturation {
  std::vector<ConstantSet> members;  // per concept node
  std::vector<TupleSet> pairs;       // per role node
  std::vector<std::string> violations;
  bool has_solution() const { return violations.empty(); }
};

Saturation saturate(const ObdaSpec& spec, const Instance& inst);

struct SolutionCheck {
  bool exists = true;
  std::vector<std::string> violations;
};

SolutionCheck check_solution_exists(const ObdaSpec& spec, const Instance& inst);

// Throws NoSolution when a negative axiom is violated.
ConstantSet certain_extension(const ObdaSpec& spec, const Instance& inst, const BasicConcept& c);

// The ontology induced by a TBox with mappings: basic concepts of the TBox, TBox
// subsumption, certain extensions.  Saturations are cached per instance.
class ObdaOntology : public FiniteOntology {
 public:
  explicit ObdaOntology(std::shared_ptr<const ObdaSpec> spec);

  std::size_t size() const override { return spec_->tbox.universe().size(); }
  std::string label(std::size_t i) const override { return spec_->tbox.universe()[i].str(); }
  bool subsumed(std::size_t sub, std::size_t super) const override;
  Extension extension(std::size_t i, const Instance& inst) const override;
  std::size_t length(std::size_t i) const override;
  const BasicConcept& basic_concept(std::size_t i) const { return spec_->tbox.universe()[i]; }
  const ObdaSpec& spec() const { return *spec_; }

 private:
  std::shared_ptr<const Saturation> saturation(const Instance& inst) const;
  std::shared_ptr<const ObdaSpec> spec_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, std::shared_ptr<const Saturation>> cache_;
};

ObdaOntology induce_ontology(std::shared_ptr<const ObdaSpec> spec);

}  // namespace whynot
