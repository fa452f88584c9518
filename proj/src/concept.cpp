#include "whynot/concept.hpp"

#include <algorithm>

#include "lexer.hpp"
#include "whynot/error.hpp"

namespace whynot {

std::strong_ordering compare(const Selection& a, const Selection& b) {
  if (auto c = a.attribute <=> b.attribute; c != 0) return c;
  if (auto c = static_cast<int>(a.op) <=> static_cast<int>(b.op); c != 0) return c;
  return a.value <=> b.value;
}

std::strong_ordering compare(const AtomicConcept& a, const AtomicConcept& b) {
  if (a.index() != b.index()) return a.index() <=> b.index();
  if (const auto* n = std::get_if<Nominal>(&a)) return n->value <=> std::get<Nominal>(b).value;
  if (const auto* p = std::get_if<Projection>(&a)) {
    const auto& q = std::get<Projection>(b);
    if (auto c = p->relation <=> q.relation; c != 0) return c;
    if (auto c = p->attribute <=> q.attribute; c != 0) return c;
    return std::lexicographical_compare_three_way(
        p->selections.begin(), p->selections.end(), q.selections.begin(), q.selections.end(),
        [](const Selection& x, const Selection& y) { return compare(x, y); });
  }
  return std::strong_ordering::equal;
}

bool Extension::subset_of(const Extension& o) const {
  if (o.all) return true;
  if (all) return false;
  return std::includes(o.members.begin(), o.members.end(), members.begin(), members.end());
}

Extension Extension::intersect(const Extension& o) const {
  if (all) return o;
  if (o.all) return *this;
  Extension out;
  std::set_intersection(members.begin(), members.end(), o.members.begin(), o.members.end(),
                        std::inserter(out.members, out.members.end()));
  return out;
}

std::string Extension::str() const { return all ? "ALL" : to_string(members); }

Concept::Concept(std::vector<AtomicConcept> conjuncts) : conjuncts_(std::move(conjuncts)) {
  for (auto& a : conjuncts_)
    if (auto* p = std::get_if<Projection>(&a)) {
      std::sort(p->selections.begin(), p->selections.end(),
                [](const Selection& x, const Selection& y) { return compare(x, y) < 0; });
      p->selections.erase(std::unique(p->selections.begin(), p->selections.end()),
                          p->selections.end());
    }
  std::sort(conjuncts_.begin(), conjuncts_.end(),
            [](const AtomicConcept& x, const AtomicConcept& y) { return compare(x, y) < 0; });
  conjuncts_.erase(std::unique(conjuncts_.begin(), conjuncts_.end()), conjuncts_.end());
  if (conjuncts_.size() > 1 && std::holds_alternative<Top>(conjuncts_.front()))
    conjuncts_.erase(conjuncts_.begin());
  if (conjuncts_.empty()) conjuncts_.push_back(Top{});
}

Concept Concept::projection(const Schema& s, std::string_view relation, std::string_view attribute,
                            std::vector<std::tuple<std::string, CompareOp, Constant>> where) {
  const auto& r = s.relation(relation);
  Projection p{r.name, r.require_position(attribute), std::string(attribute), {}};
  for (auto& [attr, op, v] : where) p.selections.push_back({r.require_position(attr), attr, op, v});
  return Concept(AtomicConcept{std::move(p)});
}

bool Concept::is_top() const { return std::holds_alternative<Top>(conjuncts_.front()); }

bool Concept::selection_free() const {
  for (const auto& a : conjuncts_)
    if (const auto* p = std::get_if<Projection>(&a); p && !p->selections.empty()) return false;
  return true;
}

Concept Concept::meet(const Concept& o) const {
  auto all = conjuncts_;
  all.insert(all.end(), o.conjuncts_.begin(), o.conjuncts_.end());
  return Concept(std::move(all));
}

Concept Concept::without(std::size_t i) const {
  auto rest = conjuncts_;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
  return Concept(std::move(rest));
}

std::size_t Concept::length() const {
  std::size_t n = conjuncts_.size() - 1;
  for (const auto& a : conjuncts_) {
    if (const auto* p = std::get_if<Projection>(&a)) n += 2 + 3 * p->selections.size();
    else n += 1;
  }
  return n;
}

ConstantSet Concept::constants() const {
  ConstantSet out;
  for (const auto& a : conjuncts_) {
    if (const auto* n = std::get_if<Nominal>(&a)) out.insert(n->value);
    if (const auto* p = std::get_if<Projection>(&a))
      for (const auto& s : p->selections) out.insert(s.value);
  }
  return out;
}

std::strong_ordering operator<=>(const Concept& a, const Concept& b) {
  if (auto c = a.conjuncts_.size() <=> b.conjuncts_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.conjuncts_.begin(), a.conjuncts_.end(), b.conjuncts_.begin(), b.conjuncts_.end(),
      [](const AtomicConcept& x, const AtomicConcept& y) { return compare(x, y); });
}

namespace {

// Nominal text is written bare when it reads back unchanged.
std::string nominal_text(const Constant& c) {
  if (c.is_number()) return c.str();
  const auto& t = c.as_text();
  double d;
  bool plain = !t.empty() && trim(t) == t && !parse_number(t, d) &&
               t.find_first_of("{}\"'\\") == std::string::npos;
  return plain ? t : quote_literal(c);
}

}  // namespace

std::string to_string(const AtomicConcept& a) {
  if (std::holds_alternative<Top>(a)) return "T";
  if (const auto* n = std::get_if<Nominal>(&a)) return "{" + nominal_text(n->value) + "}";
  const auto& p = std::get<Projection>(a);
  std::string out = p.relation;
  if (!p.selections.empty()) {
    out += "[";
    for (std::size_t i = 0; i < p.selections.size(); ++i) {
      const auto& s = p.selections[i];
      out += (i ? "," : "") + s.attribute_name + to_string(s.op) + quote_literal(s.value);
    }
    out += "]";
  }
  return out + "." + p.attribute_name;
}

std::string Concept::str() const {
  std::string out;
  for (std::size_t i = 0; i < conjuncts_.size(); ++i) out += (i ? " & " : "") + to_string(conjuncts_[i]);
  return out;
}

Concept parse_concept(std::string_view text, const Schema& schema) {
  detail::Lexer lx(text);
  std::vector<AtomicConcept> parts;
  do {
    if (lx.accept("{")) {
      std::string raw(trim(lx.raw_until('}')));
      if (!raw.empty() && (raw.front() == '"' || raw.front() == '\'')) {
        detail::Lexer inner(raw);
        auto c = detail::read_literal(inner);
        if (!inner.at_end()) inner.fail("unexpected text after quoted nominal");
        parts.push_back(Nominal{c});
      } else {
        if (raw.empty()) lx.fail("empty nominal");
        parts.push_back(Nominal{Constant::parse(raw)});
      }
      continue;
    }
    std::string name = lx.expect_ident("a concept term");
    const auto& next = lx.peek();
    bool rel = next.kind == detail::Tok::Punct && (next.text == "[" || next.text == ".");
    if (!rel) {
      if (name == "T" || name == "\xE2\x8A\xA4") {
        parts.push_back(Top{});
        continue;
      }
      lx.fail("expected '[' or '.' after relation " + name);
    }
    const auto& r = schema.relation(name);
    Projection p{r.name, 0, "", {}};
    if (lx.accept("[")) {
      do {
        auto attr = lx.expect_ident("an attribute");
        CompareOp op;
        if (!detail::read_compare_op(lx, op)) lx.fail("expected a comparison operator");
        p.selections.push_back({r.require_position(attr), attr, op, detail::read_literal(lx)});
      } while (lx.accept(","));
      lx.expect("]");
    }
    lx.expect(".");
    p.attribute_name = lx.expect_ident("an attribute");
    p.attribute = r.require_position(p.attribute_name);
    parts.push_back(std::move(p));
  } while (lx.accept("&"));
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return Concept(std::move(parts));
}

Extension extension(const AtomicConcept& a, const Database& db) {
  if (std::holds_alternative<Top>(a)) return Extension::everything();
  if (const auto* n = std::get_if<Nominal>(&a)) return Extension{false, {n->value}};
  const auto& p = std::get<Projection>(a);
  auto it = db.find(p.relation);
  if (it == db.end()) throw SchemaError("unknown relation '" + p.relation + "'");
  Extension out;
  for (const auto& t : it->second) {
    if (p.attribute >= t.size()) throw SchemaError("attribute out of range for " + p.relation);
    bool ok = true;
    for (const auto& s : p.selections)
      if (!satisfies(t[s.attribute], s.op, s.value)) {
        ok = false;
        break;
      }
    if (ok) out.members.insert(t[p.attribute]);
  }
  return out;
}

Extension extension(const Concept& c, const Database& db) {
  Extension out = Extension::everything();
  for (const auto& a : c.conjuncts()) {
    out = out.intersect(extension(a, db));
    if (!out.all && out.members.empty()) break;
  }
  return out;
}

bool subsumed_by_instance(const Concept& c1, const Concept& c2, const Database& db) {
  return extension(c1, db).subset_of(extension(c2, db));
}

UnionQuery concept_to_query(const Concept& c, const Schema& schema) {
  ConjunctiveQuery q;
  q.head = {"x"};
  std::size_t k = 0;
  for (const auto& a : c.conjuncts()) {
    if (const auto* n = std::get_if<Nominal>(&a)) {
      q.comparisons.push_back({"x", CompareOp::Eq, n->value});
    } else if (const auto* p = std::get_if<Projection>(&a)) {
      const auto& r = schema.relation(p->relation);
      auto var = [&](std::size_t pos) {
        return pos == p->attribute ? std::string("x")
                                   : "y" + std::to_string(k) + "_" + std::to_string(pos);
      };
      Atom atom{r.name, {}};
      for (std::size_t pos = 0; pos < r.arity(); ++pos) atom.args.push_back(Variable{var(pos)});
      q.atoms.push_back(std::move(atom));
      for (const auto& s : p->selections) q.comparisons.push_back({var(s.attribute), s.op, s.value});
      ++k;
    }
  }
  UnionQuery u;
  u.disjuncts.push_back(std::move(q));
  return u;
}

Concept minimize_irredundant(const Concept& c, const Database& db) {
  const Extension target = extension(c, db);
  Concept cur = c;
  std::size_t i = 0;
  while (i < cur.conjuncts().size() && !cur.is_top()) {
    Concept candidate = cur.without(i);
    if (extension(candidate, db) == target) cur = std::move(candidate);
    else ++i;
  }
  return cur;
}

}  // namespace whynot
