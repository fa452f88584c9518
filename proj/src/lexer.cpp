#include "lexer.hpp"

namespace whynot::detail {

namespace {

bool ident_start(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c >= 0x80;
}
bool ident_char(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '-'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

void Lexer::fail(const std::string& msg) const {
  throw ParseError(msg + " at offset " + std::to_string(has_peek_ ? peek_.pos : pos_) + " in '" +
                   std::string(src_) + "'");
}

void Lexer::skip_space() {
  while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                src_[pos_] == '\r'))
    ++pos_;
}

Token Lexer::lex() {
  skip_space();
  Token t;
  t.pos = pos_;
  if (pos_ >= src_.size()) return t;
  char c = src_[pos_];
  if (c == '"' || c == '\'') {
    char q = c;
    ++pos_;
    std::string s;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string");
      char d = src_[pos_++];
      if (d == '\\' && pos_ < src_.size()) {
        s.push_back(src_[pos_++]);
      } else if (d == q) {
        if (pos_ < src_.size() && src_[pos_] == q) {  // doubled quote
          s.push_back(q);
          ++pos_;
        } else {
          break;
        }
      } else {
        s.push_back(d);
      }
    }
    t.kind = Tok::String;
    t.text = std::move(s);
    return t;
  }
  bool signed_num = (c == '-' || c == '+') && pos_ + 1 < src_.size() &&
                    (digit(src_[pos_ + 1]) || src_[pos_ + 1] == '.');
  if (digit(c) || signed_num || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) {
    std::size_t start = pos_;
    if (signed_num) ++pos_;
    while (pos_ < src_.size() && (digit(src_[pos_]) || src_[pos_] == '.' || src_[pos_] == 'e' ||
                                  src_[pos_] == 'E' ||
                                  ((src_[pos_] == '-' || src_[pos_] == '+') &&
                                   (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')))) {
      // A trailing '.' that is not followed by a digit terminates a rule.
      if (src_[pos_] == '.' && (pos_ + 1 >= src_.size() || !digit(src_[pos_ + 1]))) break;
      ++pos_;
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }
  if (ident_start(static_cast<unsigned char>(c))) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    while (pos_ > start + 1 && src_[pos_ - 1] == '-') --pos_;  // identifiers never end in '-'
    t.kind = Tok::Ident;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }
  static const char* two[] = {":-", "<=", ">=", "!=", "<-"};
  for (const char* p : two) {
    if (src_.substr(pos_, 2) == p) {
      pos_ += 2;
      t.kind = Tok::Punct;
      t.text = p;
      return t;
    }
  }
  ++pos_;
  t.kind = Tok::Punct;
  t.text = std::string(1, c);
  return t;
}

const Token& Lexer::peek() {
  if (!has_peek_) {
    peek_ = lex();
    has_peek_ = true;
  }
  return peek_;
}

Token Lexer::next() {
  peek();
  has_peek_ = false;
  return std::move(peek_);
}

bool Lexer::accept(std::string_view punct) {
  const Token& t = peek();
  if (t.kind == Tok::Punct && t.text == punct) {
    next();
    return true;
  }
  return false;
}

void Lexer::expect(std::string_view punct) {
  if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
}

std::string Lexer::expect_ident(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Tok::Ident) fail("expected " + std::string(what));
  return next().text;
}

std::string Lexer::raw_until(char stop) {
  if (has_peek_) {
    pos_ = peek_.pos;
    has_peek_ = false;
  }
  std::size_t end = src_.find(stop, pos_);
  if (end == std::string_view::npos) fail(std::string("expected '") + stop + "'");
  std::string out(src_.substr(pos_, end - pos_));
  pos_ = end + 1;
  return out;
}

Constant read_literal(Lexer& lx) {
  Token t = lx.next();
  switch (t.kind) {
    case Tok::String:
      return Constant::text(t.text);
    case Tok::Number: {
      double v;
      if (!parse_number(t.text, v)) lx.fail("malformed number '" + t.text + "'");
      return Constant::number(v);
    }
    case Tok::Ident:
      return Constant::parse(t.text);
    default:
      lx.fail("expected a constant");
  }
}

bool read_compare_op(Lexer& lx, CompareOp& op) {
  const Token& t = lx.peek();
  if (t.kind != Tok::Punct) return false;
  if (t.text == "=") op = CompareOp::Eq;
  else if (t.text == "<") op = CompareOp::Lt;
  else if (t.text == ">") op = CompareOp::Gt;
  else if (t.text == "<=") op = CompareOp::Le;
  else if (t.text == ">=") op = CompareOp::Ge;
  else return false;
  lx.next();
  return true;
}

}  // namespace whynot::detail
