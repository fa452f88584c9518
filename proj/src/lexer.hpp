#pragma once

#include <string>
#include <string_view>

#include "whynot/constant.hpp"
#include "whynot/error.hpp"
#include "whynot/query.hpp"

namespace whynot::detail {

enum class Tok { End, Ident, String, Number, Punct };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier, unescaped string, number spelling, or punctuation
  std::size_t pos = 0;
};

// Shared tokenizer for rule and concept text.  Identifiers may contain
// letters, digits, '_', '-' and any non-ASCII byte; they cannot start with a
// digit or '-'.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek();
  Token next();
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  std::string expect_ident(std::string_view what);
  bool at_end() { return peek().kind == Tok::End; }

  // Raw characters up to (not including) `stop`; consumes the stop char.
  std::string raw_until(char stop);

  [[noreturn]] void fail(const std::string& msg) const;
  std::size_t position() const { return pos_; }

 private:
  Token lex();
  void skip_space();

  std::string_view src_;
  std::size_t pos_ = 0;
  bool has_peek_ = false;
  Token peek_;
};

// Constant literal: quoted string (always text), number, or bare identifier
// interpreted via Constant::parse.
Constant read_literal(Lexer& lx);

bool read_compare_op(Lexer& lx, CompareOp& op);

}  // namespace whynot::detail
