#include "brute_force.hpp"
#include "paper_fixtures.hpp"

#include <gtest/gtest.h>

using namespace ocus;

namespace {

const GrowKind kKinds[] = {GrowKind::None, GrowKind::Sat, GrowKind::SubsetMax,
                           GrowKind::MaxSatDomain, GrowKind::MaxSatFull};

}  // namespace

TEST(GrowStrategy, NamesRoundTrip) {
  for (const char* n : {"none", "sat", "subsetmax", "maxsat-domain", "maxsat-full", "multi-sat",
                        "multi-maxsat", "multi-subsetmax"}) {
    auto g = GrowStrategy::parse(n);
    ASSERT_TRUE(g.has_value()) << n;
    EXPECT_EQ(g->name(), n);
  }
  EXPECT_FALSE(GrowStrategy::parse("bogus").has_value());
}

TEST(Grow, ResultsAreSatisfiableSupersets) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 60; ++round) {
    WeightedFormula f = brute::random_unsat_formula(rng, 6, 14, true);
    SatOracle oracle(f);
    ElementSet s;
    for (ElementId e : f.all())
      if (std::bernoulli_distribution(0.3)(rng)) s.push_back(e);
    while (!brute::satisfiable(f, s)) s.pop_back();
    for (GrowKind k : kKinds) {
      ElementSet g = grow(s, oracle, k);
      EXPECT_TRUE(std::includes(g.begin(), g.end(), s.begin(), s.end()));
      EXPECT_TRUE(brute::satisfiable(f, g));
      if (k == GrowKind::SubsetMax) {
        for (ElementId e : f.complement(g)) EXPECT_FALSE(brute::satisfiable(f, set_union(g, ElementSet{e})));
      }
      if (k == GrowKind::MaxSatFull) {
        // No satisfiable superset of s has more elements.
        std::size_t best = 0;
        for (std::uint32_t m = 0; m < (1u << f.size()); ++m) {
          ElementSet t = brute::from_mask(m);
          if (t.size() > best && std::includes(t.begin(), t.end(), s.begin(), s.end()) &&
              brute::satisfiable(f, t))
            best = t.size();
        }
        EXPECT_EQ(g.size(), best);
      }
    }
  }
}

TEST(Grow, UnsatisfiableSeedIsContradiction) {
  WeightedFormula f = fixtures::f2();
  SatOracle oracle(f);
  EXPECT_THROW(grow(f.all(), oracle, GrowKind::Sat), ContradictionError);
}

TEST(CorrSubsets, SingleModeGivesComplementOfGrow) {
  WeightedFormula f = fixtures::running_step1();
  SatOracle oracle(f);
  ElementSet s = {4};
  auto ks = corr_subsets(s, oracle, {GrowKind::SubsetMax, false});
  ASSERT_EQ(ks.size(), 1u);
  EXPECT_FALSE(ks[0].empty());
  EXPECT_FALSE(sets_intersect(ks[0], s));
  EXPECT_TRUE(brute::satisfiable(f, f.complement(ks[0])));
}

// Multi-strategy from {-x3} on the whole sequence formula: the seed is grown
// by every previous correction subset, restricted to selectable elements,
// and becomes unsatisfiable after two sets.
TEST(CorrSubsets, MultiSatFromNegX3FindsTwoSets) {
  auto cs = fixtures::running_example();
  WeightedFormula f = build_sequence_formula(cs, {}, fixtures::running_end());
  SatOracle oracle(f, hint_from(fixtures::running_end()));
  ElementSet proj = f.selectable();
  auto neg_x3 = f.find_unit(Partition::NegLit, Literal(3, false));
  ASSERT_TRUE(neg_x3.has_value());
  auto ks = corr_subsets({*neg_x3}, oracle, {GrowKind::Sat, true}, &proj);
  EXPECT_EQ(ks.size(), 2u);
  for (std::size_t a = 0; a < ks.size(); ++a) {
    EXPECT_FALSE(ks[a].empty());
    EXPECT_FALSE(set_contains(ks[a], *neg_x3));
    EXPECT_TRUE(brute::satisfiable(f, f.complement(ks[a])));
    // Sets may share non-selectable facts (x3) but not selectable elements.
    for (std::size_t b = a + 1; b < ks.size(); ++b)
      EXPECT_TRUE(set_intersection(set_intersection(ks[a], ks[b]), proj).empty());
  }
}

TEST(CorrSubsets, MultiSetsArePairwiseDisjointOnRandomFormulas) {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 60; ++round) {
    WeightedFormula f = brute::random_unsat_formula(rng, 6, 12, false);
    SatOracle oracle(f);
    for (GrowKind k : {GrowKind::Sat, GrowKind::SubsetMax, GrowKind::MaxSatDomain}) {
      auto ks = corr_subsets({}, oracle, {k, true});
      ASSERT_FALSE(ks.empty());
      for (std::size_t a = 0; a < ks.size(); ++a) {
        EXPECT_TRUE(brute::satisfiable(f, f.complement(ks[a])));
        for (std::size_t b = a + 1; b < ks.size(); ++b) EXPECT_FALSE(sets_intersect(ks[a], ks[b]));
      }
    }
  }
}

TEST(CorrSubsets, SatisfiableFormulaHasNoCorrectionSubset) {
  WeightedFormula f;
  f.add(Clause::from_dimacs({1, 2}), Partition::Constraint, 1);
  f.add(Clause::from_dimacs({-1}), Partition::Constraint, 1);
  SatOracle oracle(f);
  // Everything is satisfiable together: nothing is left to hit.
  EXPECT_THROW(corr_subsets({}, oracle, {GrowKind::SubsetMax, false}, nullptr), InvalidInputError);
}
