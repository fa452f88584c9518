#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"

using namespace whynot;
using namespace whynot::testing;

TEST(ParseQuery, RulesAndErrors) {
  auto q = parse_query("q(x,y) :- TC(x,z), TC(z,y), y >= 5 ; TC(x,y).");
  ASSERT_EQ(q.disjuncts.size(), 2u);
  EXPECT_EQ(q.arity(), 2u);
  EXPECT_EQ(q.disjuncts[0].atoms.size(), 2u);
  ASSERT_EQ(q.disjuncts[0].comparisons.size(), 1u);
  EXPECT_EQ(q.disjuncts[0].comparisons[0].op, CompareOp::Ge);
  EXPECT_EQ(q.disjuncts[0].comparisons[0].value, N(5));
  EXPECT_THROW(parse_query("q(x) :- R(y)."), ParseError);        // unsafe head
  EXPECT_THROW(parse_query("q(x) :- R(x), y < 3."), ParseError);  // unbound comparison
  EXPECT_THROW(parse_query("q(x) :- R(x"), ParseError);
  EXPECT_NO_THROW(parse_query("q(x) :- x = \"Amsterdam\"."));
}

TEST(EvalCq, TwoHopConnections) {
  auto ans = evaluate(two_hop_query(), cities());
  TupleSet expected{tup({"Amsterdam", "Rome"}), tup({"Amsterdam", "Amsterdam"}), tup({"Berlin", "Berlin"}),
                    tup({"New York", "Santa Cruz"})};
  EXPECT_EQ(ans, expected);
}

TEST(EvalCq, BigCityBody) {
  auto ans = evaluate(parse_query("q(x) :- Cities(x, y, z, w), y >= 5000000."), cities());
  EXPECT_EQ(ans, (TupleSet{{T("New York")}, {T("Tokyo")}}));
}

TEST(EvalCq, EmptyInstance) {
  auto empty = Instance::create(cities_views_only(), Database{});
  EXPECT_TRUE(evaluate(two_hop_query(), empty).empty());
}

TEST(EvalCq, UnknownRelation) {
  EXPECT_THROW(cities_schema()->check_query(parse_query("q(x) :- Nope(x).")), SchemaError);
  EXPECT_THROW(cities_schema()->check_query(parse_query("q(x) :- Cities(x).")), SchemaError);
}

TEST(EvalUcq, ReachableBody) {
  auto def = cities_schema()->view_definition("Reachable")->body;
  EXPECT_EQ(evaluate(def, cities()), cities().tuples("Reachable"));
}

TEST(EvalUcq, SetSemantics) {
  auto one = parse_query("q(x) :- Train-Connections(x, y).");
  auto twice = parse_query("q(x) :- Train-Connections(x, y) ; Train-Connections(x, y).");
  EXPECT_EQ(evaluate(one, cities()), evaluate(twice, cities()));
  EXPECT_EQ(evaluate(one, cities()), evaluate(one.disjuncts.front(), cities()));
}

TEST(EvalCq, MatchesNaiveEvaluationOnRandomInstances) {
  Rng rng(101);
  for (int round = 0; round < 300; ++round) {
    auto w = random_world(rng);
    auto q = random_cq(rng, *w.schema, w.constants, 1 + pick(rng, 2), 3);
    EXPECT_EQ(evaluate(q, w.data), naive_eval(q, w.data)) << to_string(q);
  }
}

TEST(UnfoldViews, BigCity) {
  auto u = unfold_views(parse_query("q(x) :- BigCity(x)."), *cities_schema());
  ASSERT_EQ(u.disjuncts.size(), 1u);
  const auto& d = u.disjuncts.front();
  ASSERT_EQ(d.atoms.size(), 1u);
  EXPECT_EQ(d.atoms[0].relation, "Cities");
  EXPECT_EQ(d.atoms[0].args[0], Term(Variable{"x"}));
  ASSERT_EQ(d.comparisons.size(), 1u);
  EXPECT_EQ(d.comparisons[0].op, CompareOp::Ge);
  EXPECT_EQ(d.comparisons[0].value, N(5000000));
}

TEST(UnfoldViews, ViewFreeQueryUnchanged) {
  auto q = two_hop_query();
  auto u = unfold_views(q, *cities_schema());
  ASSERT_EQ(u.disjuncts.size(), 1u);
  EXPECT_EQ(u.disjuncts[0], q.disjuncts[0]);
}

TEST(UnfoldViews, ReachableHasTwoDisjuncts) {
  auto u = unfold_views(parse_query("q(x, y) :- Reachable(x, y)."), *cities_schema());
  ASSERT_EQ(u.disjuncts.size(), 2u);
  for (const auto& d : u.disjuncts)
    for (const auto& a : d.atoms) EXPECT_EQ(a.relation, "Train-Connections");
}

TEST(UnfoldViews, PreservesAnswersOnRandomBases) {
  Rng rng(5);
  const auto& s = *cities_views_only();
  std::vector<std::string> queries = {
      "q(x) :- BigCity(x).",
      "q(x, y) :- Reachable(x, y), BigCity(x).",
      "q(x) :- Reachable(x, y), Reachable(y, x).",
      "q(z) :- EuropeanCountry(z), Cities(x, p, z, w), p < 3000000.",
      "q(x) :- Reachable(x, \"c\") ; BigCity(x)."};
  for (int round = 0; round < 100; ++round) {
    Database base;
    auto cs = random_constants(rng, 6);
    for (int k = 0; k < 5; ++k) base["Train-Connections"].insert({pick_from(rng, cs), pick_from(rng, cs)});
    for (const auto& c : cs)
      if (coin(rng)) base["Cities"].insert({c, N(double(pick(rng, 9)) * 1000000), pick_from(rng, cs),
                                           T(coin(rng) ? "Europe" : "Asia")});
    auto full = materialize_views(s, base);
    for (const auto& text : queries) {
      auto q = parse_query(text);
      EXPECT_EQ(evaluate(unfold_views(q, s), full), evaluate(q, full)) << text;
    }
  }
}

TEST(Contains, ComparisonIntervals) {
  auto q1 = parse_query("q(x) :- Cities(x, y, z, w), y > 7000000.");
  auto q2 = parse_query("q(x) :- Cities(x, y, z, w), y >= 5000000.");
  EXPECT_TRUE(contains(q1, q2));
  EXPECT_FALSE(contains(q2, q1));
  EXPECT_TRUE(contains(q1, q1));
  auto all = parse_query("q(x) :- Cities(x, y, z, w).");
  auto europe = parse_query("q(x) :- Cities(x, y, z, \"Europe\").");
  EXPECT_FALSE(contains(all, europe));
  EXPECT_TRUE(contains(europe, all));
}

TEST(Contains, CompleteOnComparisonFreeQueries) {
  Rng rng(17);
  int positives = 0;
  for (int round = 0; round < 600; ++round) {
    auto w = random_world(rng, 3, 2, 2);
    std::size_t m = 1 + pick(rng, 2);
    auto q1 = random_cq(rng, *w.schema, w.constants, m, 3, false, false);
    auto q2 = random_cq(rng, *w.schema, w.constants, m, 2, false, false);
    bool expected = homomorphism_contained(q1, q2);
    positives += expected;
    EXPECT_EQ(contains(UnionQuery{"q", {q1}}, UnionQuery{"q", {q2}}), expected)
        << to_string(q1) << "  vs  " << to_string(q2);
  }
  EXPECT_GT(positives, 20);
}

TEST(Contains, SoundOnRandomInstances) {
  Rng rng(23);
  int checked = 0;
  for (int round = 0; round < 400 && checked < 60; ++round) {
    auto w = random_world(rng, 4, 1, 2);
    auto q1 = random_cq(rng, *w.schema, w.constants, 1, 2);
    auto q2 = random_cq(rng, *w.schema, w.constants, 1, 2);
    UnionQuery u1{"q", {q1}}, u2{"q", {q2}};
    if (!contains(u1, u2)) continue;
    ++checked;
    for (int k = 0; k < 200; ++k) {
      Database db;
      for (const auto& r : w.schema->relations()) {
        TupleSet& ts = db[r.name];
        std::size_t rows = pick(rng, 7);
        for (std::size_t i = 0; i < rows; ++i) {
          Tuple t;
          for (std::size_t a = 0; a < r.arity(); ++a) t.push_back(pick_from(rng, w.constants));
          ts.insert(t);
        }
      }
      auto a1 = evaluate(u1, db), a2 = evaluate(u2, db);
      EXPECT_TRUE(std::includes(a2.begin(), a2.end(), a1.begin(), a1.end()))
          << to_string(q1) << " vs " << to_string(q2);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Chase, TrainConnectionIntoCities) {
  const auto& s = *cities_ids_only();
  std::vector<Atom> facts{{"Train-Connections", {T("a"), T("b")}}};
  std::vector<const InclusionDependency*> one{s.ids()[1]};
  auto r = chase(facts, one, s, 10);
  EXPECT_TRUE(r.fixpoint);
  ASSERT_EQ(r.facts.size(), 2u);
  const auto& c = r.facts[1];
  EXPECT_EQ(c.relation, "Cities");
  EXPECT_EQ(c.args[0], Term(T("a")));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(is_variable(c.args[i]));
}

TEST(Chase, BigCityIntoTrainConnections) {
  const auto& s = *cities_ids_only();
  std::vector<const InclusionDependency*> one{s.ids()[0]};
  auto r = chase({{"BigCity", {T("a")}}}, one, s, 10);
  ASSERT_EQ(r.facts.size(), 2u);
  EXPECT_EQ(r.facts[1].relation, "Train-Connections");
  EXPECT_EQ(r.facts[1].args[0], Term(T("a")));
  EXPECT_TRUE(is_variable(r.facts[1].args[1]));
}

TEST(Chase, ClosedFactsUnchanged) {
  const auto& s = *cities_ids_only();
  std::vector<Atom> facts{{"Train-Connections", {T("a"), T("a")}}, {"Cities", {T("a"), N(1), T("X"), T("Y")}}};
  auto r = chase(facts, s.ids(), s, 10);
  EXPECT_TRUE(r.fixpoint);
  EXPECT_EQ(r.facts, facts);
}

TEST(Chase, ResultSatisfiesEveryIdAtFixpoint) {
  const auto& s = *cities_ids_only();
  Rng rng(29);
  for (int round = 0; round < 100; ++round) {
    std::vector<Atom> facts;
    auto cs = random_constants(rng, 4);
    for (int k = 0; k < 3; ++k) {
      if (coin(rng)) facts.push_back({"BigCity", {pick_from(rng, cs)}});
      else facts.push_back({"Train-Connections", {pick_from(rng, cs), pick_from(rng, cs)}});
    }
    auto r = chase(facts, s.ids(), s, 20);
    ASSERT_TRUE(r.fixpoint);
    for (const auto* id : s.ids())
      for (const auto& f : r.facts) {
        if (f.relation != id->from) continue;
        bool ok = std::any_of(r.facts.begin(), r.facts.end(), [&](const Atom& g) {
          if (g.relation != id->to) return false;
          for (std::size_t k = 0; k < id->from_positions.size(); ++k)
            if (!(g.args[id->to_positions[k]] == f.args[id->from_positions[k]])) return false;
          return true;
        });
        EXPECT_TRUE(ok);
      }
  }
}
