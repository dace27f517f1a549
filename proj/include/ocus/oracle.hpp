#pragma once

// Satisfiability checks of element subsets and maximal consequences.

#include <ocus/formula.hpp>
#include <ocus/sat_solver.hpp>

#include <map>
#include <optional>

namespace ocus {

// Total assignment over variables 1..n (index 0 unused).
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<bool> values) : values_(std::move(values)) {}

  int num_vars() const { return static_cast<int>(values_.size()) - 1; }
  bool value(int var) const { return values_.at(var); }
  bool holds(Literal l) const { return value(l.var()) == l.positive(); }
  bool satisfies(const Clause& c) const {
    for (Literal l : c.literals())
      if (l.var() <= num_vars() && holds(l)) return true;
    return false;
  }
  Interpretation to_interpretation() const {
    std::vector<Literal> lits;
    for (int v = 1; v <= num_vars(); ++v) lits.emplace_back(v, values_[v]);
    return Interpretation(std::move(lits));
  }

 private:
  std::vector<bool> values_;
};

struct SatResult {
  bool sat = false;
  std::optional<Model> model;
};

// Preferred decision value per variable.
using PolarityHint = std::map<int, bool>;

inline PolarityHint hint_from(const Interpretation& i) {
  PolarityHint h;
  for (Literal l : i) h[l.var()] = l.positive();
  return h;
}

// Incremental satisfiability oracle over one WeightedFormula. Every element
// is guarded by a selector variable so subsets are checked by assumptions
// and learnt clauses carry over between calls.
class SatOracle {
 public:
  explicit SatOracle(const WeightedFormula& f, PolarityHint hint = {},
                     std::uint64_t seed = 0)
      : formula_(&f), solver_(seed) {
    nvars_ = f.num_vars();
    solver_.ensure_vars(nvars_);
    selectors_.reserve(f.size());
    for (std::size_t e = 0; e < f.size(); ++e) {
      int s = solver_.new_var();
      selectors_.push_back(s);
      solver_.set_polarity(s, false);
      std::vector<sat::Lit> lits;
      for (Literal l : f[e].clause.literals()) lits.push_back(sat::to_internal(l));
      lits.push_back(sat::Lit::make(s, true));
      solver_.add_clause(std::move(lits));
    }
    set_hint(hint);
  }

  void set_hint(const PolarityHint& hint) {
    hint_ = hint;
    for (int v = 0; v < nvars_; ++v) solver_.clear_polarity(v);
    for (auto [var, val] : hint)
      if (var >= 1 && var <= nvars_) solver_.set_polarity(var - 1, val);
  }

  SatResult check(const ElementSet& subset, const Deadline& deadline = Deadline::never()) {
    std::vector<sat::Lit> assumptions;
    assumptions.reserve(subset.size());
    for (ElementId e : subset) {
      if (e >= selectors_.size())
        throw InvalidInputError("unknown element " + std::to_string(e));
      assumptions.push_back(sat::Lit::make(selectors_[e], false));
    }
    ++calls_;
    if (solver_.solve(assumptions, deadline) == sat::Status::Unsat) return {false, std::nullopt};
    std::vector<bool> values(nvars_ + 1, false);
    for (int v = 1; v <= nvars_; ++v) values[v] = solver_.model_value(v - 1);
    Model m(std::move(values));
    for (ElementId e : subset)
      if (!m.satisfies((*formula_)[e].clause))
        throw std::logic_error("SAT oracle returned a model violating an active clause");
    return {true, std::move(m)};
  }

  bool is_sat(const ElementSet& subset, const Deadline& deadline = Deadline::never()) {
    return check(subset, deadline).sat;
  }

  // Elements whose clause holds in `m`.
  ElementSet satisfied_by(const Model& m) const {
    ElementSet r;
    for (std::size_t e = 0; e < formula_->size(); ++e)
      if (m.satisfies((*formula_)[e].clause)) r.push_back(e);
    return r;
  }

  const WeightedFormula& formula() const { return *formula_; }
  const PolarityHint& hint() const { return hint_; }
  std::uint64_t calls() const { return calls_; }

 private:
  const WeightedFormula* formula_;
  sat::Solver solver_;
  int nvars_ = 0;
  std::vector<int> selectors_;
  PolarityHint hint_;
  std::uint64_t calls_ = 0;
};

inline SatResult check(const ElementSet& subset, const WeightedFormula& f,
                       const PolarityHint& hint = {}) {
  SatOracle o(f, hint);
  return o.check(subset);
}

inline int max_var(std::span<const Clause> clauses, const Interpretation& i) {
  int n = 0;
  for (const Clause& c : clauses) n = std::max(n, c.max_var());
  for (Literal l : i) n = std::max(n, l.var());
  return n;
}

// Maximal consequence of `constraints /\ i`: the literals true in every model.
// Model intersection: start from one model and repeatedly ask for a model
// that falsifies at least one surviving candidate literal.
inline Interpretation propagate(std::span<const Clause> constraints,
                                const Interpretation& i,
                                const Deadline& deadline = Deadline::never(),
                                int num_vars = 0) {
  const int n = std::max(num_vars, max_var(constraints, i));
  sat::Solver solver;
  solver.ensure_vars(n);
  for (const Clause& c : constraints) {
    if (c.empty()) throw ContradictionError("empty clause");
    std::vector<sat::Lit> lits;
    for (Literal l : c.literals()) lits.push_back(sat::to_internal(l));
    solver.add_clause(std::move(lits));
  }
  for (Literal l : i) solver.add_clause({sat::to_internal(l)});
  if (solver.solve({}, deadline) == sat::Status::Unsat)
    throw ContradictionError("constraints and interpretation are unsatisfiable");

  std::vector<Literal> candidate;
  for (int v = 1; v <= n; ++v) candidate.emplace_back(v, solver.model_value(v - 1));
  for (;;) {
    // Steer towards the opposite values to eliminate many candidates at once.
    for (Literal l : candidate) solver.set_polarity(l.var() - 1, !l.positive());
    std::vector<sat::Lit> block;
    for (Literal l : candidate) block.push_back(sat::to_internal(~l));
    if (block.empty() || !solver.add_clause(block)) break;
    if (solver.solve({}, deadline) == sat::Status::Unsat) break;
    std::vector<Literal> kept;
    for (Literal l : candidate)
      if (solver.model_value(l.var() - 1) == l.positive()) kept.push_back(l);
    candidate = std::move(kept);
  }
  return Interpretation(std::move(candidate));
}

inline Interpretation propagate(std::span<const WeightedClause> constraints,
                                const Interpretation& i,
                                const Deadline& deadline = Deadline::never()) {
  std::vector<Clause> cs;
  cs.reserve(constraints.size());
  for (const auto& wc : constraints) cs.push_back(wc.clause);
  return propagate(std::span<const Clause>(cs), i, deadline);
}

}  // namespace ocus
