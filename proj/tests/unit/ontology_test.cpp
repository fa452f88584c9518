#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/random.hpp"
#include "whynot/error.hpp"

using namespace whynot;
using namespace whynot::testing;

TEST(LoadOntology, CityHierarchyClosure) {
  const auto& o = city_ontology();
  ASSERT_EQ(o.size(), 6u);
  auto id = [&](const char* n) { return *o.find(n); };
  EXPECT_TRUE(o.subsumed(id("Dutch-City"), id("City")));
  EXPECT_TRUE(o.subsumed(id("East-Coast-City"), id("City")));
  EXPECT_TRUE(o.subsumed(id("City"), id("City")));
  EXPECT_FALSE(o.subsumed(id("City"), id("Dutch-City")));
  EXPECT_FALSE(o.subsumed(id("Dutch-City"), id("US-City")));
  EXPECT_FALSE(o.find("Town").has_value());
}

TEST(LoadOntology, SingleConceptNoEdges) {
  auto o = load_ontology(R"({"concepts": ["A"], "subsumptions": [], "ext": {"A": {"list": ["x"]}}})",
                         *cities_schema());
  ASSERT_EQ(o.size(), 1u);
  EXPECT_TRUE(o.subsumed(0, 0));
}

TEST(LoadOntology, Errors) {
  const auto& s = *cities_schema();
  EXPECT_THROW(load_ontology(R"({"concepts": ["A"], "subsumptions": [["A", "B"]], "ext": {"A": {"list": []}}})", s),
               SchemaError);
  EXPECT_THROW(load_ontology(R"({"concepts": ["A"], "subsumptions": [], "ext": {"B": {"list": []}}})", s),
               SchemaError);
  EXPECT_THROW(load_ontology(R"({"concepts": ["A"], "ext": {"A": {"query": "q(x) :- Nope(x)."}}})", s), SchemaError);
  EXPECT_THROW(load_ontology(R"({"concepts": ["A"], "ext": {"A": {"query": "q(x, y) :- Reachable(x, y)."}}})", s),
               SchemaError);
  EXPECT_THROW(load_ontology("[", s), ParseError);
}

TEST(LoadOntology, ClosureIsTransitiveOnRandomEdges) {
  Rng rng(67);
  for (int round = 0; round < 100; ++round) {
    std::size_t n = 1 + pick(rng, 7);
    std::vector<std::string> names;
    std::vector<FileOntology::Definition> defs;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("C" + std::to_string(i));
      defs.emplace_back(ConstantSet{});
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (int k = 0; k < 6; ++k) edges.emplace_back(pick(rng, n), pick(rng, n));
    FileOntology o(names, edges, defs);
    for (auto [a, b] : edges) EXPECT_TRUE(o.subsumed(a, b));
    for (std::size_t a = 0; a < n; ++a) {
      EXPECT_TRUE(o.subsumed(a, a));
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (o.subsumed(a, b) && o.subsumed(b, c)) EXPECT_TRUE(o.subsumed(a, c));
    }
  }
}

TEST(CheckConsistency, CityOntologyIsConsistent) {
  auto r = check_consistency(city_ontology(), cities());
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.violations.empty());
}

TEST(CheckConsistency, DutchUnderUsIsWitnessedByAmsterdam) {
  auto o = load_ontology(R"({"concepts": ["Dutch-City", "US-City"], "subsumptions": [["Dutch-City", "US-City"]],
    "ext": {"Dutch-City": {"list": ["Amsterdam"]}, "US-City": {"list": ["New York", "San Francisco", "Santa Cruz"]}}})",
                         *cities_schema());
  auto r = check_consistency(o, cities());
  EXPECT_FALSE(r.consistent);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].sub, 0u);
  EXPECT_EQ(r.violations[0].super, 1u);
  EXPECT_EQ(r.violations[0].witness, T("Amsterdam"));
}

TEST(CheckConsistency, ExplicitListsIgnoreTheInstance) {
  auto empty = Instance::create(cities_views_only(), Database{});
  auto r = check_consistency(city_ontology(), empty);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(ext_of(city_ontology(), "Dutch-City", empty), (Extension{false, texts({"Amsterdam"})}));
}

TEST(CheckConsistency, VerdictMatchesDirectRecheck) {
  Rng rng(71);
  for (int round = 0; round < 100; ++round) {
    auto w = random_world(rng);
    auto inst = w.instance();
    std::size_t n = 1 + pick(rng, 5);
    std::vector<std::string> names;
    std::vector<FileOntology::Definition> defs;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("C" + std::to_string(i));
      ConstantSet e;
      for (const auto& c : w.constants)
        if (coin(rng)) e.insert(c);
      defs.emplace_back(e);
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (int k = 0; k < 3; ++k) edges.emplace_back(pick(rng, n), pick(rng, n));
    FileOntology o(names, edges, defs);
    bool direct = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (o.subsumed(a, b) && !o.extension(a, inst).subset_of(o.extension(b, inst))) direct = false;
    EXPECT_EQ(check_consistency(o, inst).consistent, direct);
  }
}

TEST(ExtOf, Examples) {
  EXPECT_EQ(ext_of(city_ontology(), "European-City", cities()).members, texts({"Amsterdam", "Berlin", "Rome"}));
  EXPECT_EQ(ext_of(city_ontology(), "West-Coast-City", cities()).members, texts({"Santa Cruz", "San Francisco"}));
  auto o = load_ontology(R"({"concepts": ["Big"], "ext": {"Big": {"query": "q(x) :- BigCity(x)."}}})", *cities_schema());
  EXPECT_EQ(ext_of(o, "Big", cities()).members, texts({"New York", "Tokyo"}));
  EXPECT_THROW(ext_of(city_ontology(), "Town", cities()), SchemaError);
}

// OBDA

namespace {

std::vector<std::string> universe_labels(const TBox& t) {
  std::vector<std::string> out;
  for (const auto& c : t.universe()) out.push_back(c.str());
  return out;
}

ConstantSet certain(const char* c) {
  return certain_extension(*city_obda(), cities(), city_obda()->tbox.parse_concept(c));
}

}  // namespace

TEST(TBoxSubsumption, Examples) {
  const auto& t = city_obda()->tbox;
  auto c = [&](const char* s) { return t.parse_concept(s); };
  EXPECT_TRUE(tbox_subsumption(t, c("Dutch-City"), c("City")));
  EXPECT_TRUE(tbox_subsumption(t, c("Country"), c("Country")));
  EXPECT_FALSE(tbox_subsumption(t, c("City"), c("Dutch-City")));
  EXPECT_TRUE(tbox_subsumption(t, c("Dutch-City"), c("exists hasCountry")));
  EXPECT_TRUE(tbox_subsumption(t, c("exists connected-"), c("exists hasCountry")));
  EXPECT_FALSE(tbox_subsumption(t, c("EU-City"), c("N.A.-City")));
  EXPECT_THROW(c("Town"), SchemaError);
  EXPECT_THROW(c("exists Town"), SchemaError);
}

TEST(TBoxSubsumption, RoleInclusionsAndUnsatisfiability) {
  TBox t({"A", "B", "C"}, {"P", "S"},
         {{{"A", false, false}, {"B", false, false}, false},
          {{"A", false, false}, {"B", false, false}, true},
          {{"S", true, true}, {"C", false, false}, false}},
         {{{"P", false}, {"S", false}, false}});
  auto c = [&](const char* s) { return t.parse_concept(s); };
  EXPECT_TRUE(tbox_subsumption(t, c("exists P"), c("exists S")));
  EXPECT_TRUE(tbox_subsumption(t, c("exists P-"), c("exists S-")));
  EXPECT_TRUE(tbox_subsumption(t, c("exists P-"), c("C")));
  EXPECT_FALSE(tbox_subsumption(t, c("exists S"), c("exists P")));
  EXPECT_TRUE(t.entails(BasicRole{"P", true}, BasicRole{"S", true}));
  // A ⊑ B and A ⊑ ¬B: A is unsatisfiable and sits below everything.
  EXPECT_TRUE(t.unsatisfiable(c("A")));
  EXPECT_TRUE(tbox_subsumption(t, c("A"), c("C")));
  EXPECT_FALSE(t.unsatisfiable(c("B")));
}

TEST(InduceOntology, ThirteenBasicConcepts) {
  auto o = induce_ontology(city_obda());
  std::vector<std::string> expected = {"City",
                                       "EU-City",
                                       "N.A.-City",
                                       "Dutch-City",
                                       "US-City",
                                       "Country",
                                       "Continent",
                                       "exists hasCountry",
                                       "exists hasCountry-",
                                       "exists hasContinent",
                                       "exists hasContinent-",
                                       "exists connected",
                                       "exists connected-"};
  EXPECT_EQ(universe_labels(city_obda()->tbox), expected);
  EXPECT_EQ(o.size(), 13u);
  EXPECT_EQ(o.length(*o.find("City")), 1u);
  EXPECT_EQ(o.length(*o.find("exists connected")), 2u);
  EXPECT_EQ(o.length(*o.find("exists connected-")), 3u);
}

TEST(InduceOntology, EmptyTBox) {
  auto spec = std::make_shared<const ObdaSpec>(
      load_obda(R"J({"concepts": [], "roles": [], "axioms": [], "mappings": []})J", cities_schema()));
  auto o = induce_ontology(spec);
  EXPECT_EQ(o.size(), 0u);
}

TEST(InduceOntology, ConsistentWithCityInstance) {
  auto o = induce_ontology(city_obda());
  EXPECT_TRUE(check_consistency(o, cities()).consistent);
}

TEST(CertainExtension, Examples) {
  EXPECT_EQ(certain("EU-City"), texts({"Amsterdam", "Berlin", "Rome"}));
  EXPECT_EQ(certain("exists hasCountry-"), texts({"Netherlands", "Germany", "Italy", "USA", "Japan"}));
  EXPECT_EQ(certain("exists connected"), texts({"Amsterdam", "Berlin", "New York", "San Francisco", "Tokyo"}));
  EXPECT_EQ(certain("exists connected-"), texts({"Berlin", "Rome", "Amsterdam", "San Francisco", "Santa Cruz", "Kyoto"}));
  EXPECT_EQ(certain("N.A.-City"), texts({"New York", "San Francisco", "Santa Cruz"}));
  EXPECT_EQ(certain("City"), texts({"Amsterdam", "Berlin", "Rome", "New York", "San Francisco", "Santa Cruz", "Tokyo",
                                    "Kyoto"}));
  EXPECT_EQ(certain("Continent"), texts({"Europe", "N.America", "Asia"}));
  EXPECT_EQ(certain("Country"), texts({"Netherlands", "Germany", "Italy", "USA", "Japan"}));
  // Country ⊑ ∃hasContinent marks countries without inventing continents for them.
  auto has_continent = certain("exists hasContinent");
  EXPECT_EQ(has_continent.size(), 13u);
  EXPECT_TRUE(has_continent.count(T("Japan")));
}

TEST(CheckSolutionExists, CityInstanceAndEmptyInstance) {
  EXPECT_TRUE(check_solution_exists(*city_obda(), cities()).exists);
  auto empty = Instance::create(cities_schema(), [] {
    Database db;
    for (const auto& r : cities_schema()->relations()) db[r.name];
    return db;
  }());
  EXPECT_TRUE(check_solution_exists(*city_obda(), empty).exists);
  EXPECT_TRUE(certain_extension(*city_obda(), empty, city_obda()->tbox.parse_concept("City")).empty());
}

TEST(CheckSolutionExists, NegativeAxiomViolation) {
  auto schema = std::make_shared<const Schema>(load_schema(R"({"relations": {"R": ["a"]}})"));
  auto spec = std::make_shared<const ObdaSpec>(load_obda(
      R"J({"concepts": ["A", "B"], "roles": [], "axioms": [{"lhs": "A", "rhs": "!B"}],
          "mappings": [{"body": "R(x)", "head": "A(x)"}, {"body": "R(x)", "head": "B(x)"}]})J",
      schema));
  auto inst = Instance::create(schema, Database{{"R", {{T("c")}}}});
  auto r = check_solution_exists(*spec, inst);
  EXPECT_FALSE(r.exists);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_NE(r.violations[0].find("c"), std::string::npos) << r.violations[0];
  EXPECT_THROW(certain_extension(*spec, inst, spec->tbox.parse_concept("A")), NoSolution);
  EXPECT_THROW(induce_ontology(spec).extension(0, inst), NoSolution);
}

TEST(LoadObda, Errors) {
  auto s = cities_schema();
  EXPECT_THROW(load_obda(R"J({"concepts": ["A"], "roles": [], "axioms": [{"lhs": "A", "rhs": "B"}], "mappings": []})J", s),
               SchemaError);
  EXPECT_THROW(load_obda(R"J({"concepts": ["A"], "roles": [], "axioms": [],
                             "mappings": [{"body": "Cities(x, y)", "head": "A(x)"}]})J", s),
               SchemaError);
  EXPECT_THROW(load_obda(R"J({"concepts": ["A"], "roles": [], "axioms": [],
                             "mappings": [{"body": "BigCity(x)", "head": "A(x, x)"}]})J", s),
               SchemaError);
  EXPECT_THROW(load_obda(R"J({"concepts": ["A"], "roles": [], "axioms": [],
                             "mappings": [{"body": "BigCity(x)", "head": "A(y)"}]})J", s),
               Error);
}

namespace {

// Valid sub-instances of the city instance: random subsets of the base rows.
std::optional<Instance> city_subset(Rng& rng, const Database& from) {
  Database base;
  auto& cs = base["Cities"];
  auto& tc = base["Train-Connections"];
  for (const auto& t : from.at("Cities"))
    if (coin(rng, 0.7)) cs.insert(t);
  for (const auto& t : from.at("Train-Connections"))
    if (coin(rng, 0.7)) tc.insert(t);
  // Repair: drop connections leaving the kept cities, then big cities with no
  // outgoing connection, until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    ConstantSet names;
    for (const auto& t : cs) names.insert(t[0]);
    for (auto it = tc.begin(); it != tc.end();)
      if (!names.count((*it)[0]) || !names.count((*it)[1])) it = tc.erase(it), changed = true;
      else ++it;
    ConstantSet starts;
    for (const auto& t : tc) starts.insert(t[0]);
    for (auto it = cs.begin(); it != cs.end();)
      if ((*it)[1] >= N(5000000) && !starts.count((*it)[0])) it = cs.erase(it), changed = true;
      else ++it;
  }
  try {
    return Instance::with_views(cities_schema(), base);
  } catch (const ConstraintViolation&) {
    return std::nullopt;
  }
}

}  // namespace

TEST(Saturation, MonotoneUnderAddedFacts) {
  Rng rng(73);
  auto o = induce_ontology(city_obda());
  int checked = 0;
  for (int round = 0; round < 300 && checked < 60; ++round) {
    auto big = city_subset(rng, cities().data());
    if (!big) continue;
    auto small = city_subset(rng, big->data());
    if (!small) continue;
    ++checked;
    for (std::size_t i = 0; i < o.size(); ++i)
      EXPECT_TRUE(o.extension(i, *small).subset_of(o.extension(i, *big))) << o.label(i);
  }
  EXPECT_GT(checked, 20);
}

TEST(Saturation, SubsumptionImpliesInclusionAndClosure) {
  Rng rng(79);
  auto o = induce_ontology(city_obda());
  const auto& t = city_obda()->tbox;
  for (int round = 0; round < 60; ++round) {
    auto inst = city_subset(rng, cities().data());
    if (!inst) continue;
    for (std::size_t i = 0; i < o.size(); ++i)
      for (std::size_t j = 0; j < o.size(); ++j)
        if (o.subsumed(i, j))
          EXPECT_TRUE(o.extension(i, *inst).subset_of(o.extension(j, *inst))) << o.label(i) << " " << o.label(j);
    // Re-applying every positive rule to the saturation adds nothing.
    auto sat = saturate(*city_obda(), *inst);
    const auto& creach = t.concept_reach();
    for (std::size_t a = 0; a < t.concept_nodes(); ++a)
      for (std::size_t b = 0; b < t.concept_nodes(); ++b)
        if (creach[a][b])
          EXPECT_TRUE(std::includes(sat.members[b].begin(), sat.members[b].end(), sat.members[a].begin(),
                                    sat.members[a].end()));
    const auto& rreach = t.role_reach();
    for (std::size_t a = 0; a < t.role_nodes(); ++a) {
      for (std::size_t b = 0; b < t.role_nodes(); ++b)
        if (rreach[a][b])
          EXPECT_TRUE(std::includes(sat.pairs[b].begin(), sat.pairs[b].end(), sat.pairs[a].begin(), sat.pairs[a].end()));
      auto role = t.role_of_node(a);
      const auto& dom = sat.members[t.concept_node(BasicConcept{role.name, true, role.inverse})];
      for (const auto& p : sat.pairs[a]) EXPECT_TRUE(dom.count(p[0]));
    }
  }
}
