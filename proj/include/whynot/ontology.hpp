#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whynot/concept.hpp"
#include "whynot/instance.hpp"
#include "whynot/query.hpp"

namespace whynot {

// An ontology over a finite universe of concepts, addressed by index.
// `subsumed(a, b)` reads "a ⊑ b" and is reflexive and transitive.
class FiniteOntology {
 public:
  virtual ~FiniteOntology() = default;

  virtual std::size_t size() const = 0;
  virtual std::string label(std::size_t i) const = 0;
  virtual bool subsumed(std::size_t sub, std::size_t super) const = 0;
  virtual Extension extension(std::size_t i, const Instance& inst) const = 0;
  virtual std::vector<Extension> extensions(const Instance& inst) const;
  // Number of symbols needed to write the concept.
  virtual std::size_t length(std::size_t) const { return 1; }

  std::optional<std::size_t> find(std::string_view label) const;
};

struct ConsistencyViolation {
  std::size_t sub, super;
  Constant witness;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

// Every subsumption pair must respect extension inclusion on `inst`.
ConsistencyReport check_consistency(const FiniteOntology& o, const Instance& inst);

// Extension of a named concept; throws SchemaError for unknown names.
Extension ext_of(const FiniteOntology& o, std::string_view label, const Instance& inst);

// Named concepts with explicit or query-defined extensions.  Explicit lists
// do not depend on the instance.
class FileOntology : public FiniteOntology {
 public:
  using Definition = std::variant<ConstantSet, UnionQuery>;

  // `edges` are (sub, super) index pairs; the reflexive-transitive closure is
  // taken here.
  FileOntology(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
               std::vector<Definition> definitions);

  std::size_t size() const override { return names_.size(); }
  std::string label(std::size_t i) const override { return names_[i]; }
  bool subsumed(std::size_t sub, std::size_t super) const override {
    return closure_[sub * names_.size() + super];
  }
  Extension extension(std::size_t i, const Instance& inst) const override;
  const Definition& definition(std::size_t i) const { return defs_[i]; }

 private:
  std::vector<std::string> names_;
  std::vector<bool> closure_;
  std::vector<Definition> defs_;
};

// JSON: {"concepts":[..], "subsumptions":[[sub,super],..],
//        "ext":{name:{"list":[..]} | {"query":"q(x) :- .."}}}
// Query definitions are checked against `schema`.
FileOntology load_ontology(std::string_view json_text, const Schema& schema);
FileOntology load_ontology_file(const std::string& path, const Schema& schema);

// A finite list of concept-language expressions, kept in canonical order, with
// subsumption taken on one instance or over all instances of a schema.
class ConceptOntology : public FiniteOntology {
 public:
  static ConceptOntology instance_order(std::vector<Concept> concepts, const Instance& inst);
  static ConceptOntology schema_order(std::vector<Concept> concepts, const Schema& schema);

  std::size_t size() const override { return concepts_.size(); }
  std::string label(std::size_t i) const override { return concepts_[i].str(); }
  bool subsumed(std::size_t sub, std::size_t super) const override {
    return order_[sub * concepts_.size() + super];
  }
  Extension extension(std::size_t i, const Instance& inst) const override {
    return whynot::extension(concepts_[i], inst);
  }
  std::size_t length(std::size_t i) const override { return concepts_[i].length(); }
  const Concept& concept_at(std::size_t i) const { return concepts_[i]; }
  const std::vector<Concept>& concepts() const { return concepts_; }

 private:
  ConceptOntology() = default;
  void sort_unique(std::vector<Concept> concepts);
  std::vector<Concept> concepts_;
  std::vector<bool> order_;
};

}  // namespace whynot
