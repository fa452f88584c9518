#pragma once

#include <stdexcept>
#include <string>

namespace whynot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text: queries, concepts, JSON, CSV.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that does not fit the schema: unknown relations or
// attributes, arity mismatches, cyclic views, dangling concept names.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConstraintClass : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class TuplePresent : public Error {
 public:
  using Error::Error;
};

}  // namespace whynot
