#include "whynot/query.hpp"

#include <set>

#include "lexer.hpp"
#include "whynot/error.hpp"

namespace whynot {

using detail::Lexer;
using detail::Tok;

std::string to_string(const Term& t) {
  return is_variable(t) ? var_name(t) : quote_literal(const_value(t));
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

bool satisfies(const Constant& value, CompareOp op, const Constant& bound) {
  auto c = value <=> bound;
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

std::string quote_literal(const Constant& c) {
  if (c.is_number()) return c.str();
  std::string out = "\"";
  for (char ch : c.as_text()) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "\"";
}

namespace {

Term read_term(Lexer& lx) {
  const auto& t = lx.peek();
  if (t.kind == Tok::Ident) return Variable{lx.next().text};
  if (t.kind == Tok::String || t.kind == Tok::Number) return detail::read_literal(lx);
  lx.fail("expected a variable or constant");
}

void read_body(Lexer& lx, ConjunctiveQuery& q) {
  do {
    std::string name = lx.expect_ident("an atom or comparison");
    if (lx.accept("(")) {
      Atom a{name, {}};
      if (!lx.accept(")")) {
        do a.args.push_back(read_term(lx));
        while (lx.accept(","));
        lx.expect(")");
      }
      q.atoms.push_back(std::move(a));
    } else {
      CompareOp op;
      if (!detail::read_compare_op(lx, op)) lx.fail("expected '(' or a comparison operator");
      q.comparisons.push_back({name, op, detail::read_literal(lx)});
    }
  } while (lx.accept(","));
}

std::vector<std::string> read_head(Lexer& lx, std::string& name) {
  name = lx.expect_ident("a query head");
  std::vector<std::string> head;
  if (lx.accept("(")) {
    if (!lx.accept(")")) {
      do head.push_back(lx.expect_ident("a head variable"));
      while (lx.accept(","));
      lx.expect(")");
    }
  }
  return head;
}

}  // namespace

void check_safe(const ConjunctiveQuery& q) {
  std::set<std::string> bound;
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (is_variable(t)) bound.insert(var_name(t));
  for (const auto& c : q.comparisons)
    if (c.op == CompareOp::Eq) bound.insert(c.variable);
  for (const auto& h : q.head)
    if (!bound.count(h)) throw ParseError("head variable '" + h + "' does not occur in the body");
  for (const auto& c : q.comparisons)
    if (!bound.count(c.variable))
      throw ParseError("comparison variable '" + c.variable + "' does not occur in an atom");
}

UnionQuery parse_query(std::string_view text) {
  Lexer lx(text);
  UnionQuery u;
  auto head = read_head(lx, u.name);
  if (!lx.accept(":-") && !lx.accept("<-")) lx.fail("expected ':-'");
  do {
    ConjunctiveQuery q;
    q.head = head;
    read_body(lx, q);
    check_safe(q);
    u.disjuncts.push_back(std::move(q));
  } while (lx.accept(";"));
  lx.accept(".");
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return u;
}

ConjunctiveQuery parse_body(std::string_view body, std::vector<std::string> head) {
  Lexer lx(body);
  ConjunctiveQuery q;
  q.head = std::move(head);
  read_body(lx, q);
  lx.accept(".");
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  check_safe(q);
  return q;
}

std::string to_string(const Atom& a) {
  std::string out = a.relation + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += to_string(a.args[i]);
  }
  return out + ")";
}

namespace {
std::string body_string(const ConjunctiveQuery& q) {
  std::string out;
  for (const auto& a : q.atoms) {
    if (!out.empty()) out += ", ";
    out += to_string(a);
  }
  for (const auto& c : q.comparisons) {
    if (!out.empty()) out += ", ";
    out += c.variable + " " + to_string(c.op) + " " + quote_literal(c.value);
  }
  return out;
}

std::string head_string(const std::vector<std::string>& head, std::string_view name) {
  std::string out(name);
  out += "(";
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i) out += ",";
    out += head[i];
  }
  return out + ")";
}
}  // namespace

std::string to_string(const ConjunctiveQuery& q, std::string_view name) {
  return head_string(q.head, name) + " :- " + body_string(q) + ".";
}

std::string to_string(const UnionQuery& u) {
  if (u.disjuncts.empty()) return u.name + "() :- false.";
  bool same_head = true;
  for (const auto& d : u.disjuncts) same_head = same_head && d.head == u.disjuncts[0].head;
  std::string out;
  if (same_head) {
    out = head_string(u.disjuncts[0].head, u.name) + " :- ";
    for (std::size_t i = 0; i < u.disjuncts.size(); ++i)
      out += (i ? " ; " : "") + body_string(u.disjuncts[i]);
    return out + ".";
  }
  // Heads differ (e.g. after unfolding): one full rule per disjunct.
  for (std::size_t i = 0; i < u.disjuncts.size(); ++i)
    out += (i ? " | " : "") + to_string(u.disjuncts[i], u.name);
  return out;
}

}  // namespace whynot
