#include "brute_force.hpp"
#include "paper_fixtures.hpp"

#include <gtest/gtest.h>

using namespace ocus;

namespace {

std::optional<Weight> finite(std::optional<Weight> w) {
  if (w && w->is_inf()) return std::nullopt;
  return w;
}

const char* kGrows[] = {"none",      "sat",       "subsetmax",    "maxsat-domain",
                        "maxsat-full", "multi-sat", "multi-maxsat", "multi-subsetmax"};

}  // namespace

TEST(Ocus, RunningExampleStepOneCostsOneHundredOne) {
  WeightedFormula f = fixtures::running_step1();
  auto p = StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit));
  for (const char* g : kGrows) {
    OcusResult r = ocus::ocus(f, p, *GrowStrategy::parse(g));
    ASSERT_TRUE(r.found()) << g;
    EXPECT_EQ(r.cost, Weight(101)) << g;
    EXPECT_EQ(r.subset, (ElementSet{2, 4})) << g;  // {x1, -x1}
  }
}

TEST(Ocus, TriviallyTrueIsSmallestUnsatisfiableSubset) {
  WeightedFormula f = fixtures::f2();
  OcusResult r = ocus::ocus(f, StructuralConstraint::trivially_true());
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.cost, *brute::min_ocus(f, StructuralConstraint::trivially_true()));
  EXPECT_FALSE(brute::satisfiable(f, r.subset));
}

TEST(Ocus, SatisfiableFormulaIsRejected) {
  WeightedFormula f;
  f.add(Clause::from_dimacs({1}), Partition::Constraint, 1);
  EXPECT_THROW(ocus::ocus(f, StructuralConstraint::trivially_true()), InvalidInputError);
}

TEST(Ocus, InfeasibleConstraintGivesFailure) {
  WeightedFormula f = fixtures::f2();
  OcusResult r = ocus::ocus(f, StructuralConstraint::exactly_one({}));
  EXPECT_FALSE(r.found());
}

TEST(Ocus, InfElementsAreNeverUsed) {
  WeightedFormula f = fixtures::running_step1();
  auto p = StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit));
  f.set_weight(1, Weight::inf());  // c2 cannot be used
  OcusResult r = ocus::ocus(f, p);
  ASSERT_TRUE(r.found());
  EXPECT_FALSE(set_contains(r.subset, ElementId{1}));
  EXPECT_EQ(r.cost, *brute::min_ocus(f, p));
  // Without c3 = x1 no literal can be derived at all.
  f.set_weight(2, Weight::inf());
  EXPECT_FALSE(ocus::ocus(f, p).found());
}

TEST(Ocus, HittingSetCostsAreLowerBounds) {
  WeightedFormula f = fixtures::running_step1();
  SatOracle oracle(f);
  auto hs = HittingSetSolver::for_formula(f, StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit)));
  OcusResult r = ocus::ocus(oracle, hs);
  ASSERT_TRUE(r.found());
  ASSERT_FALSE(r.stats.hs_costs.empty());
  for (Weight w : r.stats.hs_costs) EXPECT_LE(w, r.cost);
  EXPECT_TRUE(std::is_sorted(r.stats.hs_costs.begin(), r.stats.hs_costs.end()));
  EXPECT_EQ(r.stats.hs_costs.back(), r.cost);
  EXPECT_EQ(r.stats.iterations, r.stats.hs_costs.size());
}

TEST(Ocus, OptimalAgainstEnumeration) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 150; ++round) {
    WeightedFormula f = brute::random_unsat_formula(rng, 5, 12, true);
    StructuralConstraint p = round % 2 == 0
                                 ? StructuralConstraint::trivially_true()
                                 : StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit));
    auto expected = finite(brute::min_ocus(f, p));
    const char* g = kGrows[round % std::size(kGrows)];
    OcusResult r = ocus::ocus(f, p, *GrowStrategy::parse(g));
    ASSERT_EQ(r.found(), expected.has_value()) << "round " << round << " grow " << g;
    if (!r.found()) continue;
    EXPECT_EQ(r.cost, *expected) << "round " << round << " grow " << g;
    EXPECT_FALSE(brute::satisfiable(f, r.subset));
    EXPECT_TRUE(p.holds(r.subset, f.costs()));
  }
}

TEST(Ocus, CanonicalReturnsLexicographicallySmallestOptimum) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 80; ++round) {
    WeightedFormula f = brute::random_unsat_formula(rng, 4, 10, true);
    StructuralConstraint p = round % 2 == 0
                                 ? StructuralConstraint::trivially_true()
                                 : StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit));
    auto cost = finite(brute::min_ocus(f, p));
    if (!cost) continue;
    std::optional<ElementSet> smallest;
    for (std::uint32_t m = 0; m < (1u << f.size()); ++m) {
      ElementSet s = brute::from_mask(m);
      if (f.cost(s) != *cost || !p.holds(s, f.costs()) || brute::satisfiable(f, s)) continue;
      if (!smallest || s < *smallest) smallest = s;
    }
    const char* g = kGrows[round % std::size(kGrows)];
    OcusOptions opt;
    opt.grow = *GrowStrategy::parse(g);
    opt.canonical = true;
    SatOracle oracle(f);
    HittingSetSolver hs = HittingSetSolver::for_formula(f, p);
    OcusResult r = ocus::ocus(oracle, hs, opt);
    ASSERT_TRUE(r.found()) << "round " << round;
    EXPECT_EQ(r.cost, *cost) << "round " << round;
    EXPECT_EQ(r.subset, *smallest) << "round " << round << " grow " << g;
  }
}

TEST(OcusBounded, RunningExampleLiteralX1) {
  auto cs = fixtures::running_example();
  WeightedFormula f = build_literal_formula(cs, {}, Literal(1, true));
  SatOracle oracle(f);
  auto hs = HittingSetSolver::for_formula(f);

  OcusResult none = ocus_bounded(oracle, hs, Weight(101));  // strict: nothing cheaper
  EXPECT_FALSE(none.found());
  OcusResult zero = ocus_bounded(oracle, hs, Weight(0));
  EXPECT_FALSE(zero.found());
  OcusResult r = ocus_bounded(oracle, hs, Weight::inf());
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.cost, Weight(101));
  OcusResult r2 = ocus_bounded(oracle, hs, Weight(102));
  ASSERT_TRUE(r2.found());
  EXPECT_EQ(r2.cost, Weight(101));
}

TEST(OcusSplit, PicksCheapestLiteral) {
  auto cs = fixtures::running_example();
  Interpretation iend = fixtures::running_end();
  std::vector<WeightedFormula> fs;
  for (Literal l : iend) fs.push_back(build_literal_formula(cs, {}, l));
  std::vector<std::unique_ptr<SatOracle>> oracles;
  std::vector<HittingSetSolver> solvers;
  for (const auto& f : fs) {
    oracles.push_back(std::make_unique<SatOracle>(f));
    solvers.push_back(HittingSetSolver::for_formula(f));
  }
  std::vector<SplitEntry> entries;
  for (std::size_t k = 0; k < fs.size(); ++k)
    entries.push_back({iend.literals()[k], oracles[k].get(), &solvers[k]});
  SplitResult r = ocus_split(entries);
  ASSERT_TRUE(r.result.found());
  EXPECT_EQ(r.result.cost, Weight(101));
  EXPECT_EQ(entries[r.entry].literal, Literal(1, true));
}

TEST(OcusSplit, MatchesMinimumOverLiterals) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 60; ++round) {
    const int vars = 5;
    std::vector<WeightedClause> cs;
    for (int k = 0; k < 7; ++k)
      cs.push_back({brute::random_clause(rng, vars, 3), std::uniform_int_distribution<int>(1, 50)(rng)});
    std::vector<Clause> plain;
    for (const auto& c : cs) plain.push_back(c.clause);
    auto end = brute::consequences(plain, {}, vars);
    if (!end || end->empty()) continue;
    std::vector<WeightedFormula> fs;
    for (Literal l : *end) fs.push_back(build_literal_formula(cs, {}, l));
    std::optional<Weight> best;
    for (auto& f : fs) {
      f.reserve_vars(vars);
      auto w = brute::min_ocus(f, StructuralConstraint::trivially_true());
      ASSERT_TRUE(w.has_value());
      if (!best || *w < *best) best = w;
    }
    std::vector<std::unique_ptr<SatOracle>> oracles;
    std::vector<HittingSetSolver> solvers;
    for (const auto& f : fs) {
      oracles.push_back(std::make_unique<SatOracle>(f));
      solvers.push_back(HittingSetSolver::for_formula(f));
    }
    std::vector<SplitEntry> entries;
    for (std::size_t k = 0; k < fs.size(); ++k)
      entries.push_back({end->literals()[k], oracles[k].get(), &solvers[k]});
    SplitResult r = ocus_split(entries);
    ASSERT_TRUE(r.result.found());
    EXPECT_EQ(r.result.cost, *best) << "round " << round;
  }
}

TEST(Bootstrap, StoredSubsetsSeedANewSolver) {
  WeightedFormula f = fixtures::running_step1();
  auto p = StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit));
  SatOracle oracle(f);
  auto hs = HittingSetSolver::for_formula(f, p);
  OcusResult cold = ocus::ocus(oracle, hs);
  ASSERT_TRUE(cold.found());
  SatisfiableSubsets store;
  for (const auto& s : cold.stats.satisfiable) store.record(f, s);
  EXPECT_FALSE(store.empty());

  SatOracle oracle2(f);
  auto hs2 = HittingSetSolver::for_formula(f, p);
  EXPECT_GT(bootstrap_sets(hs2, store, f), 0u);
  OcusResult warm = ocus::ocus(oracle2, hs2);
  ASSERT_TRUE(warm.found());
  EXPECT_EQ(warm.cost, cold.cost);
  EXPECT_LE(warm.stats.iterations, cold.stats.iterations);
}

TEST(Bootstrap, StoreKeepsOnlyMaximalSubsets) {
  WeightedFormula f = fixtures::running_step1();
  SatisfiableSubsets store;
  store.record(f, {0, 1});
  store.record(f, {0});
  EXPECT_EQ(store.size(), 1u);
  store.record(f, {0, 1, 2});
  EXPECT_EQ(store.size(), 1u);
  store.record(f, {3});
  EXPECT_EQ(store.size(), 2u);
}
