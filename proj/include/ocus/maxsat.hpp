#pragma once

// Unweighted partial MaxSAT by SAT-UNSAT linear search.

#include <ocus/oracle.hpp>

namespace ocus {

struct MaxSatProblem {
  ElementSet hard;
  ElementSet soft;
  PolarityHint hint;
};

struct MaxSatSolution {
  Model model;
  ElementSet satisfied_soft;
};

namespace detail {

// Sequential counter: at most `k` of `xs` are true.
inline void add_at_most(sat::Solver& s, const std::vector<sat::Lit>& xs, int k) {
  const int n = static_cast<int>(xs.size());
  if (k >= n) return;
  if (k == 0) {
    for (sat::Lit x : xs) s.add_clause({~x});
    return;
  }
  // r[i][j]: among xs[0..i], at least j+1 are true.
  std::vector<std::vector<sat::Lit>> r(n, std::vector<sat::Lit>(k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) r[i][j] = sat::Lit::make(s.new_var(), false);
  for (int i = 0; i < n; ++i) {
    s.set_polarity(r[i][0].var(), false);
    s.add_clause({~xs[i], r[i][0]});
    if (i > 0) {
      for (int j = 0; j < k; ++j) s.add_clause({~r[i - 1][j], r[i][j]});
      for (int j = 1; j < k; ++j) s.add_clause({~xs[i], ~r[i - 1][j - 1], r[i][j]});
      s.add_clause({~xs[i], ~r[i - 1][k - 1]});
    }
  }
}

}  // namespace detail

// Maximises the number of satisfied soft elements subject to all hard ones.
inline MaxSatSolution maxsat_solve(const MaxSatProblem& p, const WeightedFormula& f,
                                   const Deadline& deadline = Deadline::never()) {
  const int n = f.num_vars();
  sat::Solver solver;
  solver.ensure_vars(n);
  for (auto [var, val] : p.hint)
    if (var >= 1 && var <= n) solver.set_polarity(var - 1, val);
  auto internal = [](const Clause& c) {
    std::vector<sat::Lit> lits;
    for (Literal l : c.literals()) lits.push_back(sat::to_internal(l));
    return lits;
  };
  for (ElementId e : p.hard) {
    if (e >= f.size()) throw InvalidInputError("unknown element " + std::to_string(e));
    solver.add_clause(internal(f[e].clause));
  }
  const ElementSet soft = set_difference(make_set(p.soft), make_set(p.hard));
  std::vector<sat::Lit> relax;
  for (ElementId e : soft) {
    if (e >= f.size()) throw InvalidInputError("unknown element " + std::to_string(e));
    int r = solver.new_var();
    solver.set_polarity(r, false);
    auto lits = internal(f[e].clause);
    lits.push_back(sat::Lit::make(r, false));
    relax.push_back(sat::Lit::make(r, false));
    solver.add_clause(std::move(lits));
  }

  auto extract = [&] {
    std::vector<bool> values(n + 1, false);
    for (int v = 1; v <= n; ++v) values[v] = solver.model_value(v - 1);
    return Model(std::move(values));
  };
  auto count_soft = [&](const Model& m) {
    ElementSet sat_soft;
    for (ElementId e : soft)
      if (m.satisfies(f[e].clause)) sat_soft.push_back(e);
    return sat_soft;
  };

  if (solver.solve({}, deadline) == sat::Status::Unsat)
    throw ContradictionError("hard clauses are unsatisfiable");
  MaxSatSolution best{extract(), {}};
  best.satisfied_soft = count_soft(best.model);
  for (ElementId e : p.hard)
    if (!best.model.satisfies(f[e].clause))
      throw std::logic_error("MaxSAT model violates a hard clause");

  while (best.satisfied_soft.size() < soft.size()) {
    // At most (falsified - 1) relaxation variables may be true.
    const int falsified = static_cast<int>(soft.size() - best.satisfied_soft.size());
    detail::add_at_most(solver, relax, falsified - 1);
    if (!solver.okay() || solver.solve({}, deadline) == sat::Status::Unsat) break;
    Model m = extract();
    best = {m, count_soft(m)};
  }
  // Satisfied soft elements reported over all of p.soft (hard ones included).
  ElementSet reported;
  for (ElementId e : make_set(p.soft))
    if (best.model.satisfies(f[e].clause)) reported.push_back(e);
  best.satisfied_soft = std::move(reported);
  return best;
}

}  // namespace ocus
