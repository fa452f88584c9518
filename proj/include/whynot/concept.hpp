#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whynot/constant.hpp"
#include "whynot/evaluate.hpp"
#include "whynot/instance.hpp"
#include "whynot/query.hpp"
#include "whynot/schema.hpp"

namespace whynot {

struct Top {
  friend bool operator==(const Top&, const Top&) = default;
};

struct Nominal {
  Constant value;
  friend bool operator==(const Nominal&, const Nominal&) = default;
};

struct Selection {
  std::size_t attribute;
  std::string attribute_name;
  CompareOp op;
  Constant value;
  friend bool operator==(const Selection& a, const Selection& b) {
    return a.attribute == b.attribute && a.op == b.op && a.value == b.value;
  }
};

// π_attribute(σ_selections(relation)); selections are kept sorted and unique.
struct Projection {
  std::string relation;
  std::size_t attribute;
  std::string attribute_name;
  std::vector<Selection> selections;
  friend bool operator==(const Projection& a, const Projection& b) {
    return a.relation == b.relation && a.attribute == b.attribute && a.selections == b.selections;
  }
};

using AtomicConcept = std::variant<Top, Nominal, Projection>;

std::strong_ordering compare(const Selection& a, const Selection& b);
std::strong_ordering compare(const AtomicConcept& a, const AtomicConcept& b);

// Symbolic extension; `all` stands for the whole constant domain.
struct Extension {
  bool all = false;
  ConstantSet members;

  static Extension everything() { return {true, {}}; }
  bool contains(const Constant& c) const { return all || members.count(c) > 0; }
  bool subset_of(const Extension& o) const;
  Extension intersect(const Extension& o) const;
  friend bool operator==(const Extension&, const Extension&) = default;
  std::string str() const;
};

// A conjunction of atomic concepts in canonical form: sorted, duplicate-free,
// with ⊤ only when it is the sole conjunct.
class Concept {
 public:
  Concept() : conjuncts_{Top{}} {}
  explicit Concept(std::vector<AtomicConcept> conjuncts);
  Concept(AtomicConcept a) : Concept(std::vector<AtomicConcept>{std::move(a)}) {}  // NOLINT

  static Concept top() { return Concept(); }
  static Concept nominal(Constant c) { return Concept(AtomicConcept{Nominal{std::move(c)}}); }
  // Resolves attribute names against the schema.
  static Concept projection(const Schema& s, std::string_view relation, std::string_view attribute,
                            std::vector<std::tuple<std::string, CompareOp, Constant>> where = {});

  const std::vector<AtomicConcept>& conjuncts() const { return conjuncts_; }
  bool is_top() const;
  bool selection_free() const;
  bool intersection_free() const { return conjuncts_.size() == 1; }

  Concept meet(const Concept& o) const;
  // Drops the i-th conjunct (⊤ if none remain).
  Concept without(std::size_t i) const;

  // Symbol count of the written form: one per ⊤, constant, relation, attribute,
  // operator and conjunction sign.
  std::size_t length() const;
  std::string str() const;
  ConstantSet constants() const;

  friend bool operator==(const Concept& a, const Concept& b) { return (a <=> b) == 0; }
  // Canonical order: fewer conjuncts first, then conjunct-wise.
  friend std::strong_ordering operator<=>(const Concept& a, const Concept& b);

 private:
  std::vector<AtomicConcept> conjuncts_;
};

std::string to_string(const AtomicConcept& a);

// Grammar:  Concept := Term ('&' Term)*
//           Term    := 'T' | '{' constant '}' | rel ['[' cond (',' cond)* ']'] '.' attr
//           cond    := attr ('='|'<'|'>'|'<='|'>=') literal
Concept parse_concept(std::string_view text, const Schema& schema);

Extension extension(const AtomicConcept& a, const Database& db);
Extension extension(const Concept& c, const Database& db);
inline Extension extension(const Concept& c, const Instance& i) { return extension(c, i.data()); }

bool subsumed_by_instance(const Concept& c1, const Concept& c2, const Database& db);
inline bool subsumed_by_instance(const Concept& c1, const Concept& c2, const Instance& i) {
  return subsumed_by_instance(c1, c2, i.data());
}

// Unary query with head variable "x" whose answers are the concept's extension
// (⊤ alone yields a query with no body, standing for every constant).
UnionQuery concept_to_query(const Concept& c, const Schema& schema);

// c1 ⊑ c2 on every instance of the schema.  Supported: no constraints, views
// only, or IDs only with selection-free concepts.  Otherwise throws
// UnsupportedConstraintClass.
bool subsumed_by_schema(const Concept& c1, const Concept& c2, const Schema& schema);

// Caches unfolded queries per concept for repeated schema-level checks.
class SchemaSubsumption {
 public:
  explicit SchemaSubsumption(const Schema& schema);
  bool operator()(const Concept& c1, const Concept& c2);

 private:
  const UnionQuery& query(const Concept& c);
  const CanonicalInstance& chased(const Concept& c);
  const Schema& schema_;
  ConstraintClass cls_;
  std::map<Concept, UnionQuery> queries_;
  std::map<Concept, CanonicalInstance> chased_;
};

enum class Fragment { Minimal, SelectionFree, IntersectionFree, Full };

Fragment parse_fragment(std::string_view name);
const char* to_string(Fragment f);
inline bool allows_selection(Fragment f) {
  return f == Fragment::IntersectionFree || f == Fragment::Full;
}
inline bool allows_intersection(Fragment f) {
  return f == Fragment::SelectionFree || f == Fragment::Full;
}
bool in_fragment(const Concept& c, Fragment f);

enum class Dedup { ByExtension, Syntactic };

// ⊤, a nominal per pool constant, and every atomic projection of the fragment.
// Selections use conditions `attr op v` with op in {=, <=, >=} and v a value of
// that column; conjunctions of conditions cover every realizable row subset.
// Throws BudgetExceeded past `budget` emitted concepts.
std::vector<Concept> enumerate_atomic_concepts(Fragment f, const Schema& schema,
                                               const ConstantSet& pool, const Database& db,
                                               Dedup dedup = Dedup::ByExtension,
                                               std::size_t budget = 1'000'000);

// Lazily closes a list of concepts under ⊓, one new extension at a time.
// Emits the input concepts first, then conjunctions of growing size.
class ConjunctionClosure {
 public:
  ConjunctionClosure(std::vector<Concept> atoms, const Database& db, std::size_t max_conjuncts = 0);
  std::optional<Concept> next();

 private:
  struct Entry {
    Concept value;
    Extension ext;
    std::size_t atoms;  // number of input concepts combined
  };
  const Database& db_;
  std::size_t max_conjuncts_;
  std::vector<Entry> base_;
  std::vector<Entry> found_;
  std::set<std::pair<bool, ConstantSet>> seen_;
  std::size_t emit_ = 0;
  std::size_t i_ = 0, j_ = 0;  // pair cursor over (found_, base_)
  void insert(Entry e);
  bool known(const Extension& e) const;
};

// Atomics plus, for fragments with intersection, the conjunction closure
// (deduplicated by extension).
std::vector<Concept> enumerate_concepts(Fragment f, const Schema& schema, const ConstantSet& pool,
                                        const Database& db, std::size_t budget = 1'000'000);

// Greedy drop-one in canonical order; the result has the same extension and no
// removable conjunct.
Concept minimize_irredundant(const Concept& c, const Database& db);
inline Concept minimize_irredundant(const Concept& c, const Instance& i) {
  return minimize_irredundant(c, i.data());
}

}  // namespace whynot
