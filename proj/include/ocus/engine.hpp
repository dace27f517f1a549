#pragma once

// Optimal constrained unsatisfiable subsets by implicit hitting-set duality:
// alternate optimal hitting sets of the collected correction subsets with
// satisfiability checks until a hitting set is itself unsatisfiable.

#include <ocus/corr_subsets.hpp>
#include <ocus/hitting_set.hpp>

#include <chrono>
#include <queue>
#include <map>

namespace ocus {

enum class OcusStatus { Found, Failure };

struct OcusStats {
  std::uint64_t iterations = 0;
  double t_hs = 0;    // seconds in hitting-set solves
  double t_sat = 0;   // seconds in satisfiability checks of hitting sets
  double t_corr = 0;  // seconds growing and extracting correction subsets
  std::size_t n_sets = 0;          // sets-to-hit held by the solver(s) at exit
  std::uint64_t sets_added = 0;    // sets-to-hit added during this call
  std::vector<Weight> hs_costs;    // cost of every intermediate hitting set
  std::vector<ElementSet> satisfiable;  // grown satisfiable subsets, in order
  std::vector<std::size_t> satisfiable_source;  // ocus_split entry of each subset

  OcusStats& operator+=(const OcusStats& o) {
    iterations += o.iterations;
    t_hs += o.t_hs;
    t_sat += o.t_sat;
    t_corr += o.t_corr;
    n_sets += o.n_sets;
    sets_added += o.sets_added;
    hs_costs.insert(hs_costs.end(), o.hs_costs.begin(), o.hs_costs.end());
    satisfiable.insert(satisfiable.end(), o.satisfiable.begin(), o.satisfiable.end());
    satisfiable_source.insert(satisfiable_source.end(), o.satisfiable_source.begin(),
                              o.satisfiable_source.end());
    return *this;
  }
};

struct OcusResult {
  OcusStatus status = OcusStatus::Failure;
  ElementSet subset;
  Weight cost = Weight::inf();
  OcusStats stats;

  bool found() const { return status == OcusStatus::Found; }
};

struct OcusOptions {
  GrowStrategy grow{GrowKind::Sat, false};
  // Restrict multi-strategy seeds to the elements the hitting-set solver can
  // currently select (finite weight).
  bool project = false;
  // Verify upfront that the whole formula is unsatisfiable.
  bool check_unsat = true;
  // Among the optimal subsets, return the one with the lexicographically
  // smallest element indices. The hitting-set solver switches to
  // lexicographic tie-breaking once the optimal cost has been reached, so
  // only the final iterations pay for it.
  bool canonical = false;
  Deadline deadline = Deadline::never();
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline ElementSet selectable(const HittingSetSolver& hs) {
  ElementSet r;
  for (std::size_t e = 0; e < hs.num_elements(); ++e)
    if (!hs.weight(e).is_inf()) r.push_back(e);
  return r;
}

// One round of Alg. 3 after the hitting set `s` turned out satisfiable:
// collect correction subsets and feed them to the solver.
inline void add_correction_subsets(const ElementSet& s, SatOracle& oracle,
                                   HittingSetSolver& hs, const OcusOptions& opt,
                                   OcusStats& st, std::size_t source = 0) {
  auto t0 = Clock::now();
  ElementSet proj;
  if (opt.project) proj = selectable(hs);
  auto ks = corr_subsets(s, oracle, opt.grow, opt.project ? &proj : nullptr, opt.deadline);
  st.t_corr += seconds_since(t0);
  const WeightedFormula& f = oracle.formula();
  std::size_t added = 0;
  for (auto& k : ks) {
    if (sets_intersect(k, s)) throw std::logic_error("correction subset intersects its seed");
    st.satisfiable.push_back(f.complement(k));
    st.satisfiable_source.push_back(source);
    if (hs.add_set(std::move(k))) ++added;
  }
  if (added == 0) throw std::logic_error("no new set-to-hit: the search would not progress");
  st.sets_added += added;
}

}  // namespace detail

// Alg. 3 over a caller-owned oracle and hitting-set solver; both may persist
// across calls. The solver's structural constraint and weights define p and f.
inline OcusResult ocus(SatOracle& oracle, HittingSetSolver& hs, const OcusOptions& opt = {}) {
  using detail::Clock;
  const WeightedFormula& f = oracle.formula();
  if (hs.num_elements() != f.size())
    throw InvalidInputError("hitting-set solver and formula disagree on the element count");
  OcusResult res;
  OcusStats& st = res.stats;
  struct RestoreTieBreak {
    HittingSetSolver& hs;
    TieBreak saved;
    ~RestoreTieBreak() { hs.set_tie_break(saved); }
  } restore{hs, hs.tie_break()};
  if (opt.check_unsat) {
    auto t0 = Clock::now();
    bool sat = oracle.is_sat(f.all(), opt.deadline);
    st.t_sat += detail::seconds_since(t0);
    if (sat) throw InvalidInputError("formula is satisfiable: it has no unsatisfiable subset");
  }
  for (;;) {
    opt.deadline.check();
    auto t0 = Clock::now();
    HsResult h = hs.solve(opt.deadline);
    st.t_hs += detail::seconds_since(t0);
    ++st.iterations;
    if (!h.found) break;
    st.hs_costs.push_back(h.cost);

    t0 = Clock::now();
    bool sat = oracle.is_sat(h.subset, opt.deadline);
    st.t_sat += detail::seconds_since(t0);
    if (!sat && opt.canonical && hs.tie_break() != TieBreak::Lexicographic) {
      // h is optimal; re-solve for the smallest optimum among the same sets.
      hs.set_tie_break(TieBreak::Lexicographic);
      continue;
    }
    if (!sat) {
      if (!hs.constraint().holds(h.subset, hs.costs()))
        throw std::logic_error("OCUS violates the structural constraint");
      res.status = OcusStatus::Found;
      res.subset = std::move(h.subset);
      res.cost = hs.costs().cost(res.subset);
      break;
    }
    detail::add_correction_subsets(h.subset, oracle, hs, opt, st);
  }
  st.n_sets = hs.num_sets();
  return res;
}

// Self-contained call: fresh oracle and solver over `f` with constraint `p`.
inline OcusResult ocus(const WeightedFormula& f, const StructuralConstraint& p,
                       GrowStrategy grow = {GrowKind::Sat, false},
                       const PolarityHint& hint = {}) {
  SatOracle oracle(f, hint);
  HittingSetSolver hs = HittingSetSolver::for_formula(f, p);
  OcusOptions opt;
  opt.grow = grow;
  return ocus(oracle, hs, opt);
}

// OCUS restricted to subsets cheaper than `bound` (Alg. 4's inner call);
// with `strict` false, subsets costing exactly `bound` qualify too. An
// infinite bound imposes nothing.
inline OcusResult ocus_bounded(SatOracle& oracle, HittingSetSolver& hs, Weight bound,
                               OcusOptions opt = {}, bool strict = true) {
  hs.set_constraint(bound.is_inf() ? StructuralConstraint::trivially_true()
                                   : StructuralConstraint::cost_bound(bound, strict));
  opt.check_unsat = false;
  return ocus(oracle, hs, opt);
}

// One per-literal problem for ocus_split.
struct SplitEntry {
  Literal literal;
  SatOracle* oracle;
  HittingSetSolver* hs;
};

struct SplitResult {
  OcusResult result;
  std::size_t entry = 0;  // index of the winning entry
};

namespace detail {

// Resolves every entry whose current optimal hitting set costs `cost` to its
// smallest optimal subset of that cost and keeps the smallest by element key.
inline void canonical_tie(std::span<const SplitEntry> entries, const std::vector<std::size_t>& tied,
                          Weight cost, OcusOptions opt, SplitResult& out) {
  opt.canonical = true;
  std::optional<std::vector<ElementKey>> best;
  for (std::size_t i : tied) {
    HittingSetSolver& hs = *entries[i].hs;
    StructuralConstraint p = hs.constraint();
    OcusResult r = ocus_bounded(*entries[i].oracle, hs, cost, opt, false);
    hs.set_constraint(std::move(p));
    r.stats.n_sets = 0;  // counted once by the caller
    std::fill(r.stats.satisfiable_source.begin(), r.stats.satisfiable_source.end(), i);
    out.result.stats += r.stats;
    if (!r.found()) continue;
    auto key = canonical_key(entries[i].oracle->formula(), r.subset);
    if (!best || key < *best) {
      best = std::move(key);
      out.result.subset = std::move(r.subset);
      out.entry = i;
    }
  }
}

}  // namespace detail

// Alg. 5: keeps one optimal hitting set per literal in a priority queue and
// only refines the cheapest one. The first popped unsatisfiable hitting set
// is a cost-minimal OUS across all literals. Ties go to the lower entry index.
inline SplitResult ocus_split(std::span<const SplitEntry> entries, OcusOptions opt = {}) {
  using detail::Clock;
  if (entries.empty()) throw InvalidInputError("ocus_split needs at least one literal");
  SplitResult out;
  OcusStats& st = out.result.stats;
  using Item = std::pair<Weight, std::size_t>;
  auto cmp = [](const Item& a, const Item& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
  std::vector<HsResult> current(entries.size());

  auto resolve = [&](std::size_t i) {
    auto t0 = Clock::now();
    current[i] = entries[i].hs->solve(opt.deadline);
    st.t_hs += detail::seconds_since(t0);
    ++st.iterations;
    if (current[i].found) {
      st.hs_costs.push_back(current[i].cost);
      queue.emplace(current[i].cost, i);
    }
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].oracle->formula().size() != entries[i].hs->num_elements())
      throw InvalidInputError("hitting-set solver and formula disagree on the element count");
    resolve(i);
  }
  while (!queue.empty()) {
    opt.deadline.check();
    auto [cost, i] = queue.top();
    queue.pop();
    const HsResult& h = current[i];
    auto t0 = Clock::now();
    bool sat = entries[i].oracle->is_sat(h.subset, opt.deadline);
    st.t_sat += detail::seconds_since(t0);
    if (!sat) {
      out.result.status = OcusStatus::Found;
      out.result.subset = h.subset;
      out.result.cost = cost;
      out.entry = i;
      if (opt.canonical) {
        std::vector<std::size_t> tied = {i};
        for (; !queue.empty() && queue.top().first == cost; queue.pop()) tied.push_back(queue.top().second);
        detail::canonical_tie(entries, tied, cost, opt, out);
      }
      break;
    }
    detail::add_correction_subsets(h.subset, *entries[i].oracle, *entries[i].hs, opt, st, i);
    resolve(i);
  }
  for (const auto& e : entries) st.n_sets += e.hs->num_sets();
  return out;
}

// Content-addressed store of satisfiable subsets, so that subsets found on one
// step formula can seed the sets-to-hit of a later, re-indexed one. Only
// subset-maximal entries are kept: their complements imply all others.
class SatisfiableSubsets {
 public:
  void record(const WeightedFormula& f, const ElementSet& s) {
    std::vector<Clause> content;
    content.reserve(s.size());
    for (ElementId e : s) content.push_back(f[e].clause);
    std::sort(content.begin(), content.end());
    content.erase(std::unique(content.begin(), content.end()), content.end());
    for (const auto& t : subsets_)
      if (t.size() >= content.size() &&
          std::includes(t.begin(), t.end(), content.begin(), content.end()))
        return;
    std::erase_if(subsets_, [&](const std::vector<Clause>& t) {
      return std::includes(content.begin(), content.end(), t.begin(), t.end());
    });
    subsets_.push_back(std::move(content));
  }
  std::size_t size() const { return subsets_.size(); }
  bool empty() const { return subsets_.empty(); }
  const std::vector<std::vector<Clause>>& subsets() const { return subsets_; }

 private:
  std::vector<std::vector<Clause>> subsets_;
};

// Adds F \ S for every stored satisfiable subset S; returns how many sets
// were new to the solver.
inline std::size_t bootstrap_sets(HittingSetSolver& hs, const SatisfiableSubsets& store,
                                  const WeightedFormula& f) {
  std::map<Clause, std::vector<ElementId>> index;
  for (ElementId e = 0; e < f.size(); ++e) index[f[e].clause].push_back(e);
  std::size_t added = 0;
  std::vector<char> in(f.size());
  for (const auto& content : store.subsets()) {
    std::fill(in.begin(), in.end(), 0);
    for (const Clause& c : content)
      if (auto it = index.find(c); it != index.end())
        for (ElementId e : it->second) in[e] = 1;
    ElementSet k;
    for (ElementId e = 0; e < f.size(); ++e)
      if (!in[e]) k.push_back(e);
    if (!k.empty() && hs.add_set(std::move(k))) ++added;
  }
  return added;
}

}  // namespace ocus
