#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whynot/constant.hpp"

namespace whynot {

struct Variable {
  std::string name;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Term = std::variant<Variable, Constant>;

inline bool is_variable(const Term& t) { return t.index() == 0; }
inline const std::string& var_name(const Term& t) { return std::get<Variable>(t).name; }
inline const Constant& const_value(const Term& t) { return std::get<Constant>(t); }
std::string to_string(const Term& t);

struct Atom {
  std::string relation;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

enum class CompareOp { Eq, Lt, Gt, Le, Ge };

const char* to_string(CompareOp op);
// `value op bound`
bool satisfies(const Constant& value, CompareOp op, const Constant& bound);

struct Comparison {
  std::string variable;
  CompareOp op;
  Constant value;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct ConjunctiveQuery {
  std::vector<std::string> head;
  std::vector<Atom> atoms;
  std::vector<Comparison> comparisons;

  std::size_t arity() const { return head.size(); }
  friend bool operator==(const ConjunctiveQuery&, const ConjunctiveQuery&) = default;
};

struct UnionQuery {
  std::string name = "q";
  std::vector<ConjunctiveQuery> disjuncts;

  std::size_t arity() const { return disjuncts.empty() ? 0 : disjuncts.front().arity(); }
};

// Rule syntax:  q(x,y) :- R(x,z), S(z,y), y >= 5 ; R(x,y) .
// Bare identifiers in atoms are variables; quoted strings and numbers are
// constants.  The right-hand side of a comparison is always a constant.
UnionQuery parse_query(std::string_view text);

// Parses a comma-separated body ("R(x,y), y > 3") under the given head.
ConjunctiveQuery parse_body(std::string_view body, std::vector<std::string> head);

// Checks safety: every head variable occurs in an atom or is pinned by an
// equality comparison; every comparison variable is bound.  Throws ParseError.
void check_safe(const ConjunctiveQuery& q);

std::string to_string(const Atom& a);
std::string to_string(const ConjunctiveQuery& q, std::string_view name = "q");
std::string to_string(const UnionQuery& q);

// Literal in rule/concept syntax: numbers bare, text double-quoted.
std::string quote_literal(const Constant& c);

}  // namespace whynot
