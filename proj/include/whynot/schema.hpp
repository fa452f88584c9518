#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whynot/query.hpp"

namespace whynot {

struct Relation {
  std::string name;
  std::vector<std::string> attributes;

  std::size_t arity() const { return attributes.size(); }
  std::optional<std::size_t> position(std::string_view attribute) const;
  // Throws SchemaError when the attribute is not declared.
  std::size_t require_position(std::string_view attribute) const;
};

// Positions are 0-based indices into the relation's attribute list.
struct FunctionalDependency {
  std::string relation;
  std::vector<std::size_t> lhs;
  std::vector<std::size_t> rhs;
};

struct InclusionDependency {
  std::string from;
  std::vector<std::size_t> from_positions;
  std::string to;
  std::vector<std::size_t> to_positions;
};

struct ViewDefinition {
  std::string view;
  UnionQuery body;
};

using Constraint = std::variant<FunctionalDependency, InclusionDependency, ViewDefinition>;

enum class ConstraintClass { None, ViewsOnly, IdsOnly, Other };

class Schema {
 public:
  Schema() = default;

  // Validates names, attribute references, view bodies and view acyclicity.
  Schema(std::vector<Relation> relations, std::vector<Constraint> constraints);

  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  const Relation* find(std::string_view name) const;
  const Relation& relation(std::string_view name) const;  // throws SchemaError

  bool is_view(std::string_view name) const;
  const ViewDefinition* view_definition(std::string_view name) const;
  // Views in dependency order: every view comes after the views its body uses.
  const std::vector<std::string>& view_order() const { return view_order_; }

  std::vector<const FunctionalDependency*> fds() const;
  std::vector<const InclusionDependency*> ids() const;
  std::vector<const ViewDefinition*> views() const;
  ConstraintClass constraint_class() const;

  // Same relations, keeping only the constraints accepted by `keep`.
  template <class Pred>
  Schema restricted(Pred keep) const {
    std::vector<Constraint> cs;
    for (const auto& c : constraints_)
      if (keep(c)) cs.push_back(c);
    return Schema(relations_, std::move(cs));
  }

  std::size_t total_arity() const;
  std::size_t max_arity() const;

  // Arity and relation-name checks for a query over this schema.
  void check_query(const UnionQuery& q) const;
  void check_query(const ConjunctiveQuery& q) const;

 private:
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Constraint> constraints_;
  std::map<std::string, std::size_t, std::less<>> view_index_;
  std::vector<std::string> view_order_;
};

std::string describe(const Constraint& c, const Schema& s);

Schema load_schema(std::string_view json_text);
Schema load_schema_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace whynot
