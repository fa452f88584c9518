#pragma once

#include <memory>
#include <string>

#include "whynot/concept.hpp"
#include "whynot/constant.hpp"
#include "whynot/explain.hpp"
#include "whynot/instance.hpp"
#include "whynot/obda.hpp"
#include "whynot/ontology.hpp"
#include "whynot/schema.hpp"

#ifndef WHYNOT_TEST_DATA
#error "WHYNOT_TEST_DATA must point at the data directory"
#endif

namespace whynot::testing {

inline std::string data_path(const std::string& rel) { return std::string(WHYNOT_TEST_DATA) + "/" + rel; }

inline Constant T(const char* s) { return Constant::text(s); }
inline Constant N(double v) { return Constant::number(v); }

inline ConstantSet texts(std::initializer_list<const char*> xs) {
  ConstantSet out;
  for (const char* x : xs) out.insert(Constant::text(x));
  return out;
}

inline Tuple tup(std::initializer_list<const char*> xs) {
  Tuple out;
  for (const char* x : xs) out.push_back(Constant::text(x));
  return out;
}

// The cities schema with all of its constraints.
inline std::shared_ptr<const Schema> cities_schema() {
  static auto s = std::make_shared<const Schema>(load_schema_file(data_path("cities/schema.json")));
  return s;
}

inline std::shared_ptr<const Schema> cities_views_only() {
  static auto s = std::make_shared<const Schema>(
      cities_schema()->restricted([](const Constraint& c) { return std::holds_alternative<ViewDefinition>(c); }));
  return s;
}

inline std::shared_ptr<const Schema> cities_ids_only() {
  static auto s = std::make_shared<const Schema>(
      cities_schema()->restricted([](const Constraint& c) { return std::holds_alternative<InclusionDependency>(c); }));
  return s;
}

inline const Instance& cities() {
  static Instance i = load_instance_dir(cities_schema(), data_path("cities/data"));
  return i;
}

inline UnionQuery two_hop_query() {
  return parse_query("q(x, y) :- Train-Connections(x, z), Train-Connections(z, y).");
}

inline const WhyNotInstance& amsterdam_new_york() {
  static WhyNotInstance w = WhyNotInstance::create(cities(), two_hop_query(), tup({"Amsterdam", "New York"}));
  return w;
}

inline const FileOntology& city_ontology() {
  static FileOntology o = load_ontology_file(data_path("cities/ontology.json"), *cities_schema());
  return o;
}

inline std::shared_ptr<const ObdaSpec> city_obda() {
  static auto s = std::make_shared<const ObdaSpec>(load_obda_file(data_path("cities/obda.json"), cities_schema()));
  return s;
}

inline Concept concept_of(const std::string& text, const Schema& s = *cities_schema()) { return parse_concept(text, s); }

// Index tuple from labels.
inline Explanation labels(const FiniteOntology& o, std::initializer_list<const char*> names) {
  Explanation e;
  for (const char* n : names) e.push_back(*o.find(n));
  return e;
}

}  // namespace whynot::testing
