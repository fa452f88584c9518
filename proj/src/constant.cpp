#include "whynot/constant.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace whynot {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Accepts [+-] digits-with-optional-thousands-groups [. digits] [e[+-]digits].
// Groups are ",ddd" with optional spaces after the comma.
bool normalize_number(std::string_view s, std::string& out) {
  out.clear();
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') out.push_back('-');
    ++i;
  }
  std::size_t int_start = i;
  while (i < s.size() && is_digit(s[i])) out.push_back(s[i++]);
  std::size_t lead = i - int_start;
  if (lead > 0 && i < s.size() && s[i] == ',') {
    if (lead > 3) return false;
    while (i < s.size() && s[i] == ',') {
      ++i;
      while (i < s.size() && s[i] == ' ') ++i;
      std::size_t g = 0;
      while (i < s.size() && is_digit(s[i]) && g < 4) {
        out.push_back(s[i++]);
        ++g;
      }
      if (g != 3) return false;
    }
  }
  bool frac = false;
  if (i < s.size() && s[i] == '.') {
    out.push_back('.');
    ++i;
    while (i < s.size() && is_digit(s[i])) {
      out.push_back(s[i++]);
      frac = true;
    }
  }
  if (lead == 0 && !frac) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    out.push_back('e');
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) out.push_back(s[i++]);
    std::size_t exp_start = i;
    while (i < s.size() && is_digit(s[i])) out.push_back(s[i++]);
    if (i == exp_start) return false;
  }
  return i == s.size();
}

}  // namespace

bool parse_number(std::string_view raw, double& out) {
  std::string norm;
  if (!normalize_number(trim(raw), norm)) return false;
  char* end = nullptr;
  out = std::strtod(norm.c_str(), &end);
  return end == norm.c_str() + norm.size() && std::isfinite(out);
}

Constant Constant::number(double v) {
  Constant c;
  c.value_ = v == 0.0 ? 0.0 : v;  // fold -0 into 0
  return c;
}

Constant Constant::text(std::string s) {
  Constant c;
  c.value_ = std::move(s);
  return c;
}

Constant Constant::parse(std::string_view raw) {
  double v;
  if (parse_number(raw, v)) return number(v);
  return text(std::string(trim(raw)));
}

std::string Constant::str() const {
  if (!is_number()) return as_text();
  double v = as_number();
  if (std::floor(v) == v && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::strong_ordering operator<=>(const Constant& a, const Constant& b) {
  if (a.value_.index() != b.value_.index()) return a.value_.index() <=> b.value_.index();
  if (a.is_number()) {
    double x = a.as_number(), y = b.as_number();
    if (x < y) return std::strong_ordering::less;
    if (y < x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  return a.as_text().compare(b.as_text()) <=> 0;
}

std::size_t Constant::hash() const {
  if (is_number()) return std::hash<double>{}(as_number());
  return std::hash<std::string>{}(as_text()) ^ 0x5bd1e995;
}

std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].str();
  }
  return out + ")";
}

std::string to_string(const ConstantSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : s) {
    if (!first) out += ", ";
    first = false;
    out += c.str();
  }
  return out + "}";
}

}  // namespace whynot
