#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "whynot/constant.hpp"
#include "whynot/error.hpp"
#include "whynot/schema.hpp"

namespace whynot {

// Raw relation extents, keyed by relation name.  No constraint guarantees.
using Database = std::map<std::string, TupleSet, std::less<>>;

ConstantSet active_domain(const Database& db);

struct ConstraintCheck {
  std::string constraint;
  bool passed = true;
  std::vector<Tuple> witnesses;
};

struct ValidationReport {
  std::vector<ConstraintCheck> checks;

  bool ok() const;
  std::string str() const;
};

class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Per-constraint pass/fail.  Views are checked by re-evaluating their bodies
// against the stored extents.
ValidationReport validate_constraints(const Schema& schema, const Database& data);

// Evaluates every view absent from `base` (or all views when `overwrite`) in
// dependency order.
Database materialize_views(const Schema& schema, Database base, bool overwrite = true);

// A database that satisfies every constraint of its schema.
class Instance {
 public:
  // Checks arities and all constraints; throws SchemaError / ConstraintViolation.
  static Instance create(std::shared_ptr<const Schema> schema, Database data);
  // Fills in missing view extents before validating.
  static Instance with_views(std::shared_ptr<const Schema> schema, Database base);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  const Database& data() const { return *data_; }
  const TupleSet& tuples(std::string_view relation) const;
  const ConstantSet& active_domain() const { return *adom_; }
  // Distinct per constructed instance; used as a cache key.
  std::uint64_t id() const { return id_; }

 private:
  Instance() = default;
  std::shared_ptr<const Schema> schema_;
  std::shared_ptr<const Database> data_;
  std::shared_ptr<const ConstantSet> adom_;
  std::uint64_t id_ = 0;
};

// CSV with a header row of attribute names; fields unquoted or double-quoted.
TupleSet read_csv(std::string_view text, const Relation& relation);

// One CSV text per relation; base relations are required, views optional.
Instance load_instance(std::shared_ptr<const Schema> schema,
                       const std::map<std::string, std::string>& tables);
// Reads <dir>/<relation>.csv for each relation.
Instance load_instance_dir(std::shared_ptr<const Schema> schema, const std::string& dir);

}  // namespace whynot
