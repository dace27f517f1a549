#include "brute_force.hpp"
#include "paper_fixtures.hpp"

#include <gtest/gtest.h>

using namespace ocus;

namespace {

void expect_minimal_unsat(const WeightedFormula& f, const ElementSet& core) {
  EXPECT_FALSE(brute::satisfiable(f, core));
  for (ElementId e : core) EXPECT_TRUE(brute::satisfiable(f, set_difference(core, ElementSet{e})));
}

}  // namespace

TEST(Mus, F2DeletionOrder) {
  WeightedFormula f = fixtures::f2();
  ElementSet core = mus_deletion(f.all(), f);
  expect_minimal_unsat(f, core);
  EXPECT_EQ(core, mus_deletion(f.all(), f));  // deterministic
}

TEST(Mus, RunningExampleStepOne) {
  WeightedFormula f = fixtures::running_step1();
  ElementSet core = mus_deletion(f.all(), f);
  expect_minimal_unsat(f, core);
}

TEST(Mus, SatisfiableInputIsRejected) {
  WeightedFormula f = fixtures::running_step1();
  EXPECT_THROW(mus_deletion({0, 1, 2}, f), InvalidInputError);
}

TEST(Mus, RandomFormulasYieldMinimalCores) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 100; ++round) {
    WeightedFormula f = brute::random_unsat_formula(rng, 6, 14, false);
    expect_minimal_unsat(f, mus_deletion(f.all(), f));
  }
}
