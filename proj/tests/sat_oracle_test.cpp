#include "brute_force.hpp"
#include "paper_fixtures.hpp"

#include <gtest/gtest.h>

using namespace ocus;

TEST(SatOracle, HitsetC3NotX1IsUnsat) {
  WeightedFormula f = fixtures::running_step1();
  EXPECT_FALSE(check({2, 4}, f).sat);
}

TEST(SatOracle, EmptySubsetIsSat) {
  WeightedFormula f = fixtures::running_step1();
  SatResult r = check({}, f);
  EXPECT_TRUE(r.sat);
  ASSERT_TRUE(r.model.has_value());
}

TEST(SatOracle, F2IsUnsat) {
  WeightedFormula f = fixtures::f2();
  EXPECT_FALSE(check(f.all(), f).sat);
  EXPECT_TRUE(check({0, 1, 2, 3}, f).sat);
}

TEST(SatOracle, ModelsSatisfyActiveClauses) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    WeightedFormula f;
    for (int k = 0; k < 30; ++k) f.add(brute::random_clause(rng, 10, 3), Partition::Constraint, 1);
    SatOracle oracle(f);
    for (int probe = 0; probe < 20; ++probe) {
      ElementSet s;
      for (std::size_t e = 0; e < f.size(); ++e)
        if (std::bernoulli_distribution(0.3)(rng)) s.push_back(e);
      SatResult r = oracle.check(s);
      EXPECT_EQ(r.sat, brute::satisfiable(f, s));
      if (r.sat) {
        for (ElementId e : s) EXPECT_TRUE(r.model->satisfies(f[e].clause));
      }
    }
  }
}

TEST(SatOracle, UnsatisfiabilityIsMonotone) {
  WeightedFormula f = fixtures::f2();
  SatOracle oracle(f);
  for (std::uint32_t m = 0; m < 64; ++m) {
    ElementSet s = brute::from_mask(m);
    if (oracle.is_sat(s)) continue;
    for (std::size_t e = 0; e < f.size(); ++e) EXPECT_FALSE(oracle.is_sat(set_union(s, ElementSet{e})));
  }
}

TEST(SatOracle, PolarityHintSteersFreeVariables) {
  WeightedFormula f;
  f.add(Clause::from_dimacs({1, 2, 3}), Partition::Constraint, 1);
  f.reserve_vars(5);
  SatOracle oracle(f, {{1, true}, {4, true}, {5, false}});
  SatResult r = oracle.check(f.all());
  ASSERT_TRUE(r.sat);
  EXPECT_TRUE(r.model->value(4));
  EXPECT_FALSE(r.model->value(5));
}

TEST(SatOracle, ExpiredDeadlineThrowsTimeout) {
  std::mt19937_64 rng(3);
  WeightedFormula f;
  // Pigeonhole 7 into 6: hard enough to need many conflicts.
  auto var = [](int p, int h) { return p * 6 + h + 1; };
  for (int p = 0; p < 7; ++p) {
    std::vector<Literal> lits;
    for (int h = 0; h < 6; ++h) lits.emplace_back(var(p, h), true);
    f.add(Clause(lits), Partition::Constraint, 1);
  }
  for (int h = 0; h < 6; ++h)
    for (int p = 0; p < 7; ++p)
      for (int q = p + 1; q < 7; ++q)
        f.add(Clause({Literal(var(p, h), false), Literal(var(q, h), false)}), Partition::Constraint, 1);
  SatOracle oracle(f);
  Deadline past = Deadline::after(std::chrono::duration<double>(-1));
  EXPECT_THROW(oracle.check(f.all(), past), TimeoutError);
  EXPECT_FALSE(oracle.is_sat(f.all()));
}

TEST(SatOracle, UnknownElementIsInputError) {
  WeightedFormula f = fixtures::f2();
  SatOracle oracle(f);
  EXPECT_THROW(oracle.check({42}), InvalidInputError);
}

TEST(Propagate, PaperExamples) {
  auto cs = fixtures::running_example();
  EXPECT_EQ(propagate(std::vector<WeightedClause>(cs), {}), fixtures::running_end());
  EXPECT_EQ(propagate(std::vector<WeightedClause>(cs), Interpretation::from_dimacs({-2})),
            fixtures::running_end());
  EXPECT_EQ(propagate(std::vector<Clause>{}, Interpretation::from_dimacs({1})),
            Interpretation::from_dimacs({1}));
}

TEST(Propagate, UnsatisfiableInputIsContradiction) {
  std::vector<Clause> cs = {Clause::from_dimacs({1}), Clause::from_dimacs({-1, 2})};
  EXPECT_THROW(propagate(cs, Interpretation::from_dimacs({-2})), ContradictionError);
}

TEST(Propagate, MatchesModelIntersectionAndIsAFixpoint) {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 150) {
    const int vars = std::uniform_int_distribution<int>(3, 14)(rng);
    const int n = std::uniform_int_distribution<int>(vars, 4 * vars)(rng);
    std::vector<Clause> cs;
    for (int k = 0; k < n; ++k) cs.push_back(brute::random_clause(rng, vars, 3));
    Interpretation i;
    if (std::bernoulli_distribution(0.5)(rng))
      i = Interpretation({Literal(std::uniform_int_distribution<int>(1, vars)(rng), true)});
    auto expected = brute::consequences(cs, i, vars);
    if (!expected) continue;
    Interpretation got = propagate(cs, i, Deadline::never(), vars);
    EXPECT_EQ(got, *expected);
    EXPECT_EQ(propagate(cs, got, Deadline::never(), vars), got);
    ++checked;
  }
}
