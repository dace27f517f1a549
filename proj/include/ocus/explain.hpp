#pragma once

// Step-wise explanation sequences: repeatedly pick the cheapest implication
// I' /\ C' => N until the maximal consequence of the problem is reached.

#include <ocus/engine.hpp>
#include <ocus/mus.hpp>

#include <limits>
#include <memory>

namespace ocus {

// Default weights of the explanation cost model.
struct CostPolicy {
  Weight constraint = 60;  // generic, puzzle-agnostic constraints
  Weight group = 100;      // instance-specific constraint groups
  Weight fact = 1;
  Weight neg_lit = 1;

  LiteralCosts literal_costs() const { return {fact, neg_lit}; }
};

enum class Strategy { Mus, Ocus, OcusBound, OcusSplit };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Mus: return "mus";
    case Strategy::Ocus: return "ocus";
    case Strategy::OcusBound: return "ocus-bound";
    case Strategy::OcusSplit: return "ocus-split";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "mus") return Strategy::Mus;
  if (s == "ocus") return Strategy::Ocus;
  if (s == "ocus-bound") return Strategy::OcusBound;
  if (s == "ocus-split") return Strategy::OcusSplit;
  return std::nullopt;
}

// How hitting-set work is reused between steps.
//  None:       every step starts from scratch.
//  Bootstrap:  fresh solvers seeded with complements of all satisfiable
//              subsets found so far.
//  Persistent: solvers live for the whole sequence over formulas that
//              contain every literal of the end interpretation; weights of
//              not-yet-usable elements are INF and updated per step.
enum class Incrementality { None, Bootstrap, Persistent };

inline const char* to_string(Incrementality i) {
  switch (i) {
    case Incrementality::None: return "none";
    case Incrementality::Bootstrap: return "bootstrap";
    case Incrementality::Persistent: return "persistent";
  }
  return "?";
}

inline std::optional<Incrementality> parse_incrementality(std::string_view s) {
  if (s == "none") return Incrementality::None;
  if (s == "bootstrap") return Incrementality::Bootstrap;
  if (s == "persistent") return Incrementality::Persistent;
  return std::nullopt;
}

struct ExplainConfig {
  Strategy strategy = Strategy::Ocus;
  GrowStrategy grow{GrowKind::Sat, false};
  Incrementality incrementality = Incrementality::None;
  LiteralCosts literal_costs{};
  std::uint64_t seed = 0;
  // Wall-clock budget for the whole sequence; nullopt means unlimited.
  std::optional<double> time_limit;
  // Also compute the deletion-MUS step cost at every state (timed apart).
  bool pair_mus = false;
  TieBreak tie_break = TieBreak::FirstFound;
  // Break ties between equally cheap steps by the smallest element key (see
  // canonical_key), so every strategy and incrementality mode follows the
  // same sequence.
  bool canonical_ties = true;
};

struct StepStats {
  std::uint64_t iterations = 0;
  std::uint64_t sets_added = 0;
  std::size_t n_sets = 0;
  double t_hs = 0;
  double t_sat = 0;
  double t_corr = 0;
  double t_total = 0;
  double t_mus_pair = 0;
};

struct ExplanationStep {
  Interpretation used_facts;                // I'
  std::vector<std::size_t> used_constraints;  // C', as constraint indices
  std::vector<Literal> targets;             // literals whose negation was used
  std::vector<Literal> derived;             // N
  Weight cost = Weight::inf();
  std::optional<Weight> mus_cost;           // paired baseline, if requested
  StepStats stats;
};

struct ExplanationSequence {
  Interpretation initial;
  Interpretation end;    // maximal consequence (the goal)
  Interpretation reached;
  std::vector<ExplanationStep> steps;
  bool complete = false;
  double t_total = 0;      // wall time, excluding paired MUS runs
  double t_propagate = 0;  // maximal-consequence computations
  // Building the persistent oracles and hitting-set solvers before step one.
  double t_setup_sat = 0, t_setup_hs = 0;

  double explained_fraction() const {
    std::size_t todo = end.size() - initial.size();
    if (todo == 0) return 1.0;
    return static_cast<double>(reached.size() - initial.size()) / static_cast<double>(todo);
  }
  double t_hs() const { return sum(&StepStats::t_hs) + t_setup_hs; }
  double t_sat() const { return sum(&StepStats::t_sat) + t_propagate + t_setup_sat; }
  double t_corr() const { return sum(&StepStats::t_corr); }
  std::uint64_t sets_added() const {
    std::uint64_t n = 0;
    for (const auto& s : steps) n += s.stats.sets_added;
    return n;
  }

 private:
  double sum(double StepStats::*field) const {
    double t = 0;
    for (const auto& s : steps) t += s.stats.*field;
    return t;
  }
};

namespace detail {

inline std::vector<Clause> clauses_of(std::span<const WeightedClause> cs) {
  std::vector<Clause> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(c.clause);
  return out;
}

struct StepOutcome {
  const WeightedFormula* formula = nullptr;
  ElementSet subset;
  Weight cost = Weight::inf();
};

struct LiteralProblem {
  Literal literal;
  std::unique_ptr<WeightedFormula> formula;
  std::unique_ptr<SatOracle> oracle;
  std::unique_ptr<HittingSetSolver> hs;
};

class SequenceBuilder {
 public:
  SequenceBuilder(std::span<const WeightedClause> constraints, const ExplainConfig& cfg,
                  const Deadline& deadline)
      : constraints_(constraints.begin(), constraints.end()),
        clauses_(clauses_of(constraints)),
        cfg_(cfg),
        deadline_(deadline) {}

  ExplanationSequence run(const Interpretation& i0) {
    using detail::Clock;
    const auto start = Clock::now();
    ExplanationSequence seq;
    seq.initial = i0;
    seq.reached = i0;
    seq.end = i0;
    double mus_time = 0;
    try {
      auto t0 = Clock::now();
      iend_ = propagate(std::span<const Clause>(clauses_), i0, deadline_);
      seq.t_propagate += seconds_since(t0);
      seq.end = iend_;
      hint_ = hint_from(iend_);
      Interpretation current = i0;
      setup(i0, seq);
      while (current.size() < iend_.size()) {
        deadline_.check();
        auto step_start = Clock::now();
        ExplanationStep step;
        StepOutcome out = one_step(current, step.stats);
        const WeightedFormula& f = *out.formula;
        step.used_facts = facts_of(f, out.subset);
        step.used_constraints = constraints_of(f, out.subset);
        step.targets = targets_of(f, out.subset);
        step.cost = out.cost;

        // N = propagate(C' /\ I') \ I
        t0 = Clock::now();
        std::vector<Clause> used;
        for (std::size_t k : step.used_constraints) used.push_back(clauses_[k]);
        Interpretation implied =
            propagate(std::span<const Clause>(used), step.used_facts, deadline_, iend_.max_var());
        seq.t_propagate += seconds_since(t0);
        step.derived = implied.minus(current).to_vector();
        check_step(step, current);

        if (cfg_.pair_mus) {
          auto m0 = Clock::now();
          step.mus_cost = mus_step(current, nullptr).cost;
          step.stats.t_mus_pair = seconds_since(m0);
          mus_time += step.stats.t_mus_pair;
        }
        current = current.merged(Interpretation(step.derived));
        t0 = Clock::now();
        advance(step.derived);
        step.stats.t_hs += seconds_since(t0);
        step.stats.t_total = seconds_since(step_start) - step.stats.t_mus_pair;
        seq.steps.push_back(std::move(step));
        seq.reached = current;
      }
      seq.complete = true;
    } catch (const TimeoutError&) {
      seq.complete = false;
    }
    seq.t_total = seconds_since(start) - mus_time;
    return seq;
  }

 private:
  void check_step(const ExplanationStep& step, const Interpretation& current) const {
    if (step.derived.empty()) throw std::logic_error("explanation step derives nothing");
    for (Literal l : step.derived)
      if (!iend_.contains(l)) throw std::logic_error("explanation step derives a non-consequence");
    for (Literal l : step.used_facts)
      if (!current.contains(l)) throw std::logic_error("explanation step uses an underived fact");
    for (Literal t : step.targets)
      if (std::find(step.derived.begin(), step.derived.end(), t) == step.derived.end())
        throw std::logic_error("explanation step does not derive its target");
  }

  PolarityHint hint() const { return hint_; }

  std::unique_ptr<SatOracle> make_oracle(const WeightedFormula& f) const {
    return std::make_unique<SatOracle>(f, hint_, cfg_.seed);
  }
  std::unique_ptr<HittingSetSolver> make_hs(const WeightedFormula& f,
                                            StructuralConstraint p) const {
    auto hs = std::make_unique<HittingSetSolver>(f.costs(), std::move(p));
    hs->set_tie_break(cfg_.tie_break);
    return hs;
  }
  OcusOptions options(bool project, bool check_unsat) const {
    OcusOptions o;
    o.grow = cfg_.grow;
    o.project = project;
    o.check_unsat = check_unsat;
    o.canonical = cfg_.canonical_ties;
    o.deadline = deadline_;
    return o;
  }

  static void absorb(StepStats& s, const OcusStats& o) {
    s.iterations += o.iterations;
    s.sets_added += o.sets_added;
    s.n_sets += o.n_sets;
    s.t_hs += o.t_hs;
    s.t_sat += o.t_sat;
    s.t_corr += o.t_corr;
  }

  // Satisfiable subsets are kept per literal for the per-literal strategies
  // (key: that literal) and in one store for the whole-formula strategy.
  void record_satisfiable(const WeightedFormula& f, const OcusStats& o, StepStats& stats,
                          std::optional<Literal> key = std::nullopt) {
    if (cfg_.incrementality != Incrementality::Bootstrap) return;
    auto t0 = Clock::now();
    SatisfiableSubsets& store = key ? literal_store_[*key] : store_;
    for (const auto& s : o.satisfiable) store.record(f, s);
    stats.t_corr += seconds_since(t0);
  }

  // --- sequence-level state -------------------------------------------------

  // Oracle construction is charged to SAT time, formulas and hitting-set
  // solvers to hitting-set time.
  void setup(const Interpretation& i0, ExplanationSequence& seq) {
    if (cfg_.incrementality != Incrementality::Persistent) return;
    const LiteralCosts lc = cfg_.literal_costs;
    auto timed = [](double& acc, auto&& fn) {
      auto t0 = Clock::now();
      fn();
      acc += seconds_since(t0);
    };
    if (cfg_.strategy == Strategy::Ocus) {
      timed(seq.t_setup_hs, [&] {
        whole_ = std::make_unique<WeightedFormula>(
            build_sequence_formula(constraints_, i0, iend_, lc));
        whole_hs_ = make_hs(*whole_, StructuralConstraint::exactly_one(
                                         whole_->with_tag(Partition::NegLit)));
      });
      timed(seq.t_setup_sat, [&] { whole_oracle_ = make_oracle(*whole_); });
    } else if (cfg_.strategy == Strategy::OcusBound || cfg_.strategy == Strategy::OcusSplit) {
      for (Literal l : iend_.minus(i0)) {
        LiteralProblem lp;
        lp.literal = l;
        timed(seq.t_setup_hs, [&] {
          lp.formula = std::make_unique<WeightedFormula>(
              build_literal_sequence_formula(constraints_, i0, iend_, l, lc));
          lp.hs = make_hs(*lp.formula, StructuralConstraint::trivially_true());
        });
        timed(seq.t_setup_sat, [&] { lp.oracle = make_oracle(*lp.formula); });
        per_literal_.emplace(l, std::move(lp));
      }
    }
  }

  // Hitting-set weight maintenance once `derived` joins the interpretation: its fact
  // elements become usable, its negated-literal elements unusable.
  void advance(const std::vector<Literal>& derived) {
    if (cfg_.incrementality != Incrementality::Persistent) return;
    const LiteralCosts lc = cfg_.literal_costs;
    auto update = [&](WeightedFormula& f, HittingSetSolver& hs) {
      for (Literal l : derived) {
        if (auto e = f.find_unit(Partition::Fact, l)) {
          f.set_weight(*e, lc.fact);
          hs.set_weight(*e, lc.fact);
        }
        if (auto e = f.find_unit(Partition::NegLit, ~l)) {
          f.set_weight(*e, Weight::inf());
          hs.set_weight(*e, Weight::inf());
        }
      }
    };
    if (whole_) update(*whole_, *whole_hs_);
    for (Literal l : derived) per_literal_.erase(l);
    for (auto& [l, lp] : per_literal_) update(*lp.formula, *lp.hs);
  }

  // --- one-step operations --------------------------------------------------

  StepOutcome one_step(const Interpretation& current, StepStats& stats) {
    switch (cfg_.strategy) {
      case Strategy::Mus: {
        auto t0 = Clock::now();
        StepOutcome out = mus_step(current, &stats);
        stats.t_sat += seconds_since(t0);
        return out;
      }
      case Strategy::Ocus: return ocus_step(current, stats);
      case Strategy::OcusBound: return bounded_step(current, stats);
      case Strategy::OcusSplit: return split_step(current, stats);
    }
    throw std::logic_error("unknown strategy");
  }

  // Alg. 2: one deletion MUS per remaining literal, keep the cheapest.
  StepOutcome mus_step(const Interpretation& current, StepStats* stats) {
    StepOutcome best;
    for (Literal l : iend_.minus(current)) {
      auto f = std::make_unique<WeightedFormula>(
          build_literal_formula(constraints_, current, l, cfg_.literal_costs));
      SatOracle oracle(*f, hint_, cfg_.seed);
      ElementSet core = mus_deletion(f->all(), oracle, deadline_);
      Weight c = f->cost(core);
      if (stats) ++stats->iterations;
      if (c < best.cost) {
        mus_formulas_.push_back(std::move(f));
        best = {mus_formulas_.back().get(), std::move(core), c};
      }
    }
    if (!best.formula) throw std::logic_error("no literal left to explain");
    return best;
  }

  StepOutcome ocus_step(const Interpretation& current, StepStats& stats) {
    if (cfg_.incrementality == Incrementality::Persistent) {
      OcusResult r = ocus(*whole_oracle_, *whole_hs_, options(true, false));
      absorb(stats, r.stats);
      if (!r.found()) throw std::logic_error("no OCUS exists for a non-final state");
      return {whole_.get(), r.subset, r.cost};
    }
    auto t0 = Clock::now();
    step_formula_ = std::make_unique<WeightedFormula>(
        build_step_formula(constraints_, current, iend_, cfg_.literal_costs));
    const WeightedFormula& f = *step_formula_;
    auto hs = make_hs(f, StructuralConstraint::exactly_one(f.with_tag(Partition::NegLit)));
    if (cfg_.incrementality == Incrementality::Bootstrap) bootstrap_sets(*hs, store_, f);
    stats.t_hs += seconds_since(t0);
    t0 = Clock::now();
    auto oracle = make_oracle(f);
    stats.t_sat += seconds_since(t0);
    OcusResult r = ocus(*oracle, *hs, options(false, true));
    absorb(stats, r.stats);
    if (!r.found()) throw std::logic_error("no OCUS exists for a non-final state");
    record_satisfiable(f, r.stats, stats);
    return {step_formula_.get(), r.subset, r.cost};
  }

  // Per-literal problem for `l` at state `current`: persistent ones are
  // reused, otherwise built fresh (and bootstrapped when configured).
  LiteralProblem& literal_problem(Literal l, const Interpretation& current, StepStats& stats) {
    if (cfg_.incrementality == Incrementality::Persistent) return per_literal_.at(l);
    LiteralProblem lp;
    lp.literal = l;
    auto t0 = Clock::now();
    lp.formula = std::make_unique<WeightedFormula>(
        build_literal_formula(constraints_, current, l, cfg_.literal_costs));
    lp.hs = make_hs(*lp.formula, StructuralConstraint::trivially_true());
    if (cfg_.incrementality == Incrementality::Bootstrap)
      bootstrap_sets(*lp.hs, literal_store_[l], *lp.formula);
    stats.t_hs += seconds_since(t0);
    t0 = Clock::now();
    lp.oracle = make_oracle(*lp.formula);
    stats.t_sat += seconds_since(t0);
    fresh_[l] = std::move(lp);
    return fresh_[l];
  }

  // Alg. 4: sweep the literals (cheapest previous explanation first) with a
  // strict cost bound given by the best explanation found so far. With
  // canonical ties the bound admits equal costs and the smallest key wins.
  StepOutcome bounded_step(const Interpretation& current, StepStats& stats) {
    fresh_.clear();
    std::vector<Literal> order = iend_.minus(current).to_vector();
    std::stable_sort(order.begin(), order.end(), [&](Literal a, Literal b) {
      auto ca = previous_cost_.find(a), cb = previous_cost_.find(b);
      bool ha = ca != previous_cost_.end(), hb = cb != previous_cost_.end();
      if (ha != hb) return ha;
      return ha && ca->second < cb->second;
    });
    StepOutcome best;
    std::vector<ElementKey> best_key;
    const bool strict = !cfg_.canonical_ties;
    for (Literal l : order) {
      LiteralProblem& lp = literal_problem(l, current, stats);
      bool persistent = cfg_.incrementality == Incrementality::Persistent;
      OcusResult r =
          ocus_bounded(*lp.oracle, *lp.hs, best.cost, options(persistent, false), strict);
      absorb(stats, r.stats);
      record_satisfiable(*lp.formula, r.stats, stats, l);
      if (!r.found()) continue;
      previous_cost_[l] = r.cost;
      auto key = canonical_key(*lp.formula, r.subset);
      if (r.cost < best.cost || key < best_key) {
        best = {lp.formula.get(), r.subset, r.cost};
        best_key = std::move(key);
      }
    }
    if (!best.formula) throw std::logic_error("no explanation found for a non-final state");
    return best;
  }

  // Alg. 5: interleaved per-literal searches through a priority queue.
  StepOutcome split_step(const Interpretation& current, StepStats& stats) {
    fresh_.clear();
    bool persistent = cfg_.incrementality == Incrementality::Persistent;
    std::vector<SplitEntry> entries;
    std::vector<LiteralProblem*> problems;
    for (Literal l : iend_.minus(current)) {
      LiteralProblem& lp = literal_problem(l, current, stats);
      lp.hs->set_constraint(StructuralConstraint::trivially_true());
      entries.push_back({l, lp.oracle.get(), lp.hs.get()});
      problems.push_back(&lp);
    }
    SplitResult r = ocus_split(entries, options(persistent, false));
    absorb(stats, r.result.stats);
    if (cfg_.incrementality == Incrementality::Bootstrap) {
      auto t0 = Clock::now();
      const auto& st = r.result.stats;
      for (std::size_t k = 0; k < st.satisfiable.size(); ++k) {
        const LiteralProblem& lp = *problems[st.satisfiable_source[k]];
        literal_store_[lp.literal].record(*lp.formula, st.satisfiable[k]);
      }
      stats.t_corr += seconds_since(t0);
    }
    if (!r.result.found()) throw std::logic_error("no explanation found for a non-final state");
    LiteralProblem& win = *problems[r.entry];
    return {win.formula.get(), r.result.subset, r.result.cost};
  }

  std::vector<WeightedClause> constraints_;
  std::vector<Clause> clauses_;
  ExplainConfig cfg_;
  Deadline deadline_;
  Interpretation iend_;
  PolarityHint hint_;

  std::unique_ptr<WeightedFormula> whole_;
  std::unique_ptr<SatOracle> whole_oracle_;
  std::unique_ptr<HittingSetSolver> whole_hs_;
  std::map<Literal, LiteralProblem> per_literal_;
  std::map<Literal, LiteralProblem> fresh_;
  std::unique_ptr<WeightedFormula> step_formula_;
  std::vector<std::unique_ptr<WeightedFormula>> mus_formulas_;
  SatisfiableSubsets store_;
  std::map<Literal, SatisfiableSubsets> literal_store_;
  std::map<Literal, Weight> previous_cost_;
};

}  // namespace detail

inline ExplanationSequence explain_sequence(std::span<const WeightedClause> constraints,
                                            const Interpretation& i0,
                                            const ExplainConfig& cfg = {}) {
  Deadline deadline = cfg.time_limit
                          ? Deadline::after(std::chrono::duration<double>(*cfg.time_limit))
                          : Deadline::never();
  detail::SequenceBuilder builder(constraints, cfg, deadline);
  return builder.run(i0);
}

}  // namespace ocus
