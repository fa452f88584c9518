#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace whynot {

// A scalar drawn from the constant domain: a decimal number or a piece of text.
// Numbers order before text; numbers compare by value, text lexicographically.
class Constant {
 public:
  Constant() : value_(std::string{}) {}

  static Constant number(double v);
  static Constant text(std::string s);

  // Interprets a raw field.  Trimmed input that reads as a number (thousands
  // separators allowed, e.g. "3,502,000") becomes numeric, anything else text.
  static Constant parse(std::string_view raw);

  bool is_number() const { return value_.index() == 0; }
  double as_number() const { return std::get<0>(value_); }
  const std::string& as_text() const { return std::get<1>(value_); }

  // Textual form; integral numbers print without a fraction.
  std::string str() const;

  friend bool operator==(const Constant& a, const Constant& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Constant& a, const Constant& b);

  std::size_t hash() const;

 private:
  std::variant<double, std::string> value_;
};

// Reads a number as written in data files; returns false when `raw` is not numeric.
bool parse_number(std::string_view raw, double& out);

std::string_view trim(std::string_view s);

using Tuple = std::vector<Constant>;
using TupleSet = std::set<Tuple>;
using ConstantSet = std::set<Constant>;

std::string to_string(const Tuple& t);
std::string to_string(const ConstantSet& s);

struct ConstantHash {
  std::size_t operator()(const Constant& c) const { return c.hash(); }
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& c : t) h = (h ^ c.hash()) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace whynot
