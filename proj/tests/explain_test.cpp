#include "brute_force.hpp"
#include "paper_fixtures.hpp"

#include <ocus/instance.hpp>

#include <gtest/gtest.h>

using namespace ocus;

namespace {

std::vector<std::int64_t> costs_of(const ExplanationSequence& s) {
  std::vector<std::int64_t> out;
  for (const auto& st : s.steps) out.push_back(st.cost.value());
  return out;
}

ExplainConfig config(Strategy s, const char* grow, Incrementality inc) {
  ExplainConfig c;
  c.strategy = s;
  c.grow = *GrowStrategy::parse(grow);
  c.incrementality = inc;
  return c;
}

const Strategy kStrategies[] = {Strategy::Ocus, Strategy::OcusBound, Strategy::OcusSplit};
const Incrementality kIncs[] = {Incrementality::None, Incrementality::Bootstrap,
                                Incrementality::Persistent};
const char* kGrows[] = {"none",      "sat",       "subsetmax",    "maxsat-domain",
                        "maxsat-full", "multi-sat", "multi-maxsat", "multi-subsetmax"};

}  // namespace

TEST(Explain, RunningExampleAllVariants) {
  auto cs = fixtures::running_example();
  for (Strategy s : kStrategies)
    for (Incrementality inc : kIncs)
      for (const char* g : kGrows) {
        ExplanationSequence seq = explain_sequence(cs, {}, config(s, g, inc));
        SCOPED_TRACE(std::string(to_string(s)) + "/" + g + "/" + to_string(inc));
        ASSERT_TRUE(seq.complete);
        EXPECT_EQ(seq.reached, fixtures::running_end());
        EXPECT_EQ(costs_of(seq), (std::vector<std::int64_t>{101, 122, 102}));
        ASSERT_EQ(seq.steps.size(), 3u);
        EXPECT_EQ(seq.steps[0].derived, (std::vector<Literal>{Literal(1, true)}));
        EXPECT_EQ(seq.steps[1].derived, (std::vector<Literal>{Literal(3, true)}));
        EXPECT_EQ(seq.steps[2].derived, (std::vector<Literal>{Literal(2, false)}));
      }
}

TEST(Explain, StepsAreSoundAndMinimal) {
  auto cs = fixtures::running_example();
  ExplanationSequence seq = explain_sequence(cs, {}, config(Strategy::Ocus, "sat", Incrementality::None));
  Interpretation current;
  for (const auto& st : seq.steps) {
    EXPECT_TRUE(st.used_facts.subset_of(current));
    // C' /\ I' entails every derived literal.
    std::vector<Clause> used;
    for (std::size_t k : st.used_constraints) used.push_back(cs[k].clause);
    auto implied = brute::consequences(used, st.used_facts, 3);
    ASSERT_TRUE(implied.has_value());
    for (Literal l : st.derived) EXPECT_TRUE(implied->contains(l));
    current = current.merged(Interpretation(st.derived));
  }
}

TEST(Explain, MusBaselineNeverCheaper) {
  auto cs = fixtures::running_example();
  ExplanationSequence mus = explain_sequence(cs, {}, config(Strategy::Mus, "sat", Incrementality::None));
  ASSERT_TRUE(mus.complete);
  EXPECT_EQ(mus.reached, fixtures::running_end());
  ExplainConfig paired = config(Strategy::Ocus, "sat", Incrementality::None);
  paired.pair_mus = true;
  ExplanationSequence seq = explain_sequence(cs, {}, paired);
  for (const auto& st : seq.steps) {
    ASSERT_TRUE(st.mus_cost.has_value());
    EXPECT_GE(*st.mus_cost, st.cost);
  }
}

TEST(Explain, NothingToExplain) {
  auto cs = fixtures::running_example();
  ExplanationSequence seq =
      explain_sequence(cs, fixtures::running_end(), config(Strategy::Ocus, "sat", Incrementality::None));
  EXPECT_TRUE(seq.complete);
  EXPECT_TRUE(seq.steps.empty());
  EXPECT_DOUBLE_EQ(seq.explained_fraction(), 1.0);
}

TEST(Explain, UnsatisfiableInputIsContradiction) {
  auto cs = fixtures::running_example();
  EXPECT_THROW(explain_sequence(cs, Interpretation::from_dimacs({-1}), {}), ContradictionError);
}

TEST(Explain, IncrementalModesAgreeOnPlantedInstances) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    InstanceFile inst = make_planted_instance(seed, {});
    auto cs = inst.constraints();
    for (Strategy s : kStrategies) {
      std::optional<std::vector<std::int64_t>> reference;
      for (Incrementality inc : kIncs) {
        ExplanationSequence seq = explain_sequence(cs, inst.init, config(s, "multi-sat", inc));
        ASSERT_TRUE(seq.complete);
        if (!reference) reference = costs_of(seq);
        else EXPECT_EQ(costs_of(seq), *reference) << "seed " << seed << " " << to_string(s) << " "
                                                  << to_string(inc);
      }
    }
  }
}

TEST(Explain, CanonicalTiesMakeVariantsChooseTheSameSteps) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    InstanceFile inst = make_planted_instance(seed, {});
    auto cs = inst.constraints();
    std::optional<std::vector<std::vector<Literal>>> reference;
    for (Strategy s : kStrategies)
      for (Incrementality inc : kIncs) {
        ExplanationSequence seq = explain_sequence(cs, inst.init, config(s, "multi-sat", inc));
        ASSERT_TRUE(seq.complete);
        std::vector<std::vector<Literal>> derived;
        for (const auto& st : seq.steps) derived.push_back(st.derived);
        if (!reference) reference = derived;
        else EXPECT_EQ(derived, *reference) << "seed " << seed << " " << to_string(s) << " "
                                            << to_string(inc);
      }
  }
}

TEST(Explain, PersistentStepsReuseSets) {
  auto cs = fixtures::running_example();
  ExplanationSequence cold = explain_sequence(cs, {}, config(Strategy::Ocus, "sat", Incrementality::None));
  ExplanationSequence warm =
      explain_sequence(cs, {}, config(Strategy::Ocus, "sat", Incrementality::Persistent));
  std::uint64_t a = 0, b = 0;
  for (const auto& s : cold.steps) a += s.stats.iterations;
  for (const auto& s : warm.steps) b += s.stats.iterations;
  EXPECT_LT(b, a);
}

TEST(Explain, ExpiredTimeLimitGivesPartialSequence) {
  InstanceFile inst = encode_sudoku(load_grid(OCUS_FIXTURES "/sudoku/s4_00_g6.grid"));
  auto cs = inst.constraints();
  ExplainConfig cfg = config(Strategy::Ocus, "sat", Incrementality::None);
  cfg.time_limit = 0.0;
  ExplanationSequence seq = explain_sequence(cs, inst.init, cfg);
  EXPECT_FALSE(seq.complete);
  EXPECT_LT(seq.explained_fraction(), 1.0);
}

TEST(Explain, StrategyNamesRoundTrip) {
  for (Strategy s : {Strategy::Mus, Strategy::Ocus, Strategy::OcusBound, Strategy::OcusSplit})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  for (Incrementality i : kIncs) EXPECT_EQ(parse_incrementality(to_string(i)), i);
  EXPECT_FALSE(parse_strategy("greedy").has_value());
}
