#pragma once

// Optimal weighted hitting sets under structural side constraints.
//
// Exact branch and bound over element inclusion. Each solve starts from the
// best of (a) the previous solution when it is still feasible and (b) a
// greedy hitting set, bounds nodes from below by a packing of pairwise
// disjoint unhit sets, and forces the last free element of any unhit set.
// Exactly-one groups are branched on before ordinary sets.

#include <ocus/formula.hpp>

#include <cstdint>
#include <limits>
#include <numeric>

namespace ocus {

class StructuralConstraint {
 public:
  enum class Kind { TriviallyTrue, ExactlyOne, CostBound, And };

  static StructuralConstraint trivially_true() { return StructuralConstraint(Kind::TriviallyTrue); }
  // Exactly one selected element from `over`. An empty group can never be
  // satisfied.
  static StructuralConstraint exactly_one(ElementSet over) {
    StructuralConstraint c(Kind::ExactlyOne);
    c.over_ = make_set(std::move(over));
    return c;
  }
  // cost(S) <= bound, or cost(S) < bound when `strict`.
  static StructuralConstraint cost_bound(Weight bound, bool strict = false) {
    StructuralConstraint c(Kind::CostBound);
    c.bound_ = bound;
    c.strict_ = strict;
    return c;
  }
  static StructuralConstraint all_of(std::vector<StructuralConstraint> parts) {
    StructuralConstraint c(Kind::And);
    c.parts_ = std::move(parts);
    return c;
  }

  Kind kind() const { return kind_; }
  const ElementSet& over() const { return over_; }
  Weight bound() const { return bound_; }
  bool strict() const { return strict_; }
  std::span<const StructuralConstraint> parts() const { return parts_; }

  bool holds(const ElementSet& s, const CostModel& costs) const {
    switch (kind_) {
      case Kind::TriviallyTrue: return true;
      case Kind::ExactlyOne: return set_intersection(s, over_).size() == 1;
      case Kind::CostBound: {
        Weight c = costs.cost(s);
        return strict_ ? c < bound_ : c <= bound_;
      }
      case Kind::And:
        for (const auto& p : parts_)
          if (!p.holds(s, costs)) return false;
        return true;
    }
    return false;
  }

  // Flattened view used by the solver.
  void collect(std::vector<ElementSet>& groups, std::optional<std::int64_t>& limit) const {
    switch (kind_) {
      case Kind::TriviallyTrue: break;
      case Kind::ExactlyOne: groups.push_back(over_); break;
      case Kind::CostBound:
        if (!bound_.is_inf()) {
          std::int64_t l = bound_.value() - (strict_ ? 1 : 0);
          limit = limit ? std::min(*limit, l) : l;
        }
        break;
      case Kind::And:
        for (const auto& p : parts_) p.collect(groups, limit);
        break;
    }
  }

 private:
  explicit StructuralConstraint(Kind k) : kind_(k) {}
  Kind kind_;
  ElementSet over_;
  Weight bound_ = Weight::inf();
  bool strict_ = false;
  std::vector<StructuralConstraint> parts_;
};

struct HsResult {
  bool found = false;
  ElementSet subset;
  Weight cost = Weight::inf();
};

// How equal-cost optima are resolved. FirstFound keeps the first optimum of
// the deterministic branch order; Lexicographic returns the lexicographically
// smallest optimal element-index set at the price of extra searches.
enum class TieBreak { FirstFound, Lexicographic };

struct HsStats {
  std::uint64_t solves = 0;
  std::uint64_t nodes = 0;
  std::uint64_t warm_starts = 0;
};

class HittingSetSolver {
 public:
  explicit HittingSetSolver(CostModel costs,
                            StructuralConstraint p = StructuralConstraint::trivially_true())
      : costs_(std::move(costs)), p_(std::move(p)) {}

  static HittingSetSolver for_formula(const WeightedFormula& f,
                                      StructuralConstraint p = StructuralConstraint::trivially_true()) {
    return HittingSetSolver(f.costs(), std::move(p));
  }

  std::size_t num_elements() const { return costs_.size(); }
  const CostModel& costs() const { return costs_; }
  Weight weight(ElementId e) const { return costs_[e]; }
  const StructuralConstraint& constraint() const { return p_; }
  const std::vector<ElementSet>& sets() const { return sets_; }
  std::size_t num_sets() const { return sets_.size(); }
  const HsStats& stats() const { return stats_; }

  // Returns false when the set was already implied by a stored one.
  bool add_set(ElementSet s) {
    s = make_set(std::move(s));
    if (s.empty()) throw InvalidInputError("cannot add an empty set-to-hit");
    if (s.back() >= costs_.size())
      throw InvalidInputError("unknown element " + std::to_string(s.back()));
    for (const auto& t : sets_)
      if (std::includes(s.begin(), s.end(), t.begin(), t.end())) return false;
    std::erase_if(sets_, [&](const ElementSet& t) {
      return std::includes(t.begin(), t.end(), s.begin(), s.end());
    });
    sets_.push_back(std::move(s));
    return true;
  }

  void set_weight(ElementId e, Weight w) { costs_.set(e, w); }
  void set_constraint(StructuralConstraint p) { p_ = std::move(p); }
  void set_tie_break(TieBreak t) { tie_break_ = t; }
  TieBreak tie_break() const { return tie_break_; }

  HsResult solve(const Deadline& deadline = Deadline::never()) {
    ++stats_.solves;
    Search search(*this, deadline);
    HsResult r = search.run(last_);
    if (search.warm_started()) ++stats_.warm_starts;
    if (r.found && tie_break_ == TieBreak::Lexicographic) r = lexicographic(r, search);
    stats_.nodes += search.nodes();
    if (r.found) {
      for (const auto& s : sets_)
        if (!sets_intersect(s, r.subset))
          throw std::logic_error("hitting set misses a set-to-hit");
      if (!p_.holds(r.subset, costs_))
        throw std::logic_error("hitting set violates the structural constraint");
      last_ = r.subset;
    }
    return r;
  }

 private:
  static constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max();

  class Search;

  // Fixes elements in ascending order, keeping each one whenever an optimum
  // containing it (and the elements fixed so far) still exists.
  // `search` is the finished search that produced the optimum.
  HsResult lexicographic(const HsResult& optimum, Search& search) {
    const std::int64_t target = optimum.cost.value();
    ElementSet in, out;
    ElementSet candidates;
    for (const auto& s : sets_) candidates = set_union(candidates, s);
    {
      std::vector<ElementSet> groups;
      std::optional<std::int64_t> limit;
      p_.collect(groups, limit);
      for (const auto& g : groups) candidates = set_union(candidates, g);
    }
    ElementSet best = optimum.subset;
    auto feasible = [&](const ElementSet& s) {
      for (const auto& t : sets_)
        if (!sets_intersect(s, t)) return false;
      return p_.holds(s, costs_);
    };
    for (ElementId e : candidates) {
      if (costs_[e].is_inf()) continue;
      if (feasible(in)) {
        best = in;
        break;
      }
      // `best` contains `in` and avoids every excluded element: when it also
      // contains e it already witnesses an optimum through e.
      bool keep = std::binary_search(best.begin(), best.end(), e);
      if (!keep) {
        if (auto r = search.probe(e, target)) {
          best = std::move(*r);
          keep = true;
        }
      }
      if (keep) in = set_union(in, ElementSet{e});
      search.fix(e, keep);
    }
    return {true, best, optimum.cost};
  }

  class Search {
   public:
    Search(const HittingSetSolver& hs, const Deadline& deadline)
        : hs_(hs), deadline_(deadline) {}

    std::uint64_t nodes() const { return nodes_; }
    bool warm_started() const { return warm_; }

    HsResult run(const std::optional<ElementSet>& previous) {
      if (!build()) return {};
      best_cost_ = limit_ == kNoLimit ? kNoLimit : limit_ + 1;
      if (previous) try_incumbent(*previous, true);
      greedy_bound();
      dfs(0);
      if (!best_) return {};
      return {true, *best_, Weight(best_cost_)};
    }

    // After run(): a completion of cost at most `target` that includes e (and respects
    // every fixed element), if one exists.
    std::optional<ElementSet> probe(ElementId e, std::int64_t target) {
      if (e >= status_.size() || weight_[e] < 0 || status_[e] != 0) return std::nullopt;
      std::size_t mark = trail_.size();
      best_.reset();
      best_cost_ = target + 1;
      include(e);
      if (!group_violated()) dfs(0);
      undo_to(mark);
      if (!best_ || best_cost_ > target) return std::nullopt;
      return best_;
    }

    // Permanently includes or excludes e.
    void fix(ElementId e, bool in) {
      if (e >= status_.size() || weight_[e] < 0 || status_[e] != 0) return;
      if (in) {
        include(e);
      } else {
        exclude(e);
      }
    }

   private:
    // Returns false when infeasible before any search.
    bool build() {
      const std::size_t n = hs_.num_elements();
      weight_.assign(n, -1);
      for (std::size_t e = 0; e < n; ++e)
        if (!hs_.costs_[e].is_inf()) weight_[e] = hs_.costs_[e].value();

      std::vector<ElementSet> groups;
      std::optional<std::int64_t> limit;
      hs_.p_.collect(groups, limit);
      limit_ = limit.value_or(kNoLimit);
      if (limit_ < 0) return false;

      auto filter = [&](const ElementSet& s) {
        ElementSet r;
        for (ElementId e : s)
          if (e < n && weight_[e] >= 0) r.push_back(e);
        return r;
      };
      group_of_.assign(n, {});
      for (const auto& g : groups) {
        ElementSet fg = filter(g);
        if (fg.empty()) return false;
        for (ElementId e : fg) group_of_[e].push_back(static_cast<int>(sets_.size()));
        sets_.push_back(std::move(fg));
        is_group_.push_back(true);
      }
      std::vector<ElementSet> plain;
      plain.reserve(hs_.sets_.size());
      for (const auto& s : hs_.sets_) {
        ElementSet fs = filter(s);
        if (fs.empty()) return false;
        plain.push_back(std::move(fs));
      }
      std::sort(plain.begin(), plain.end(), [](const ElementSet& a, const ElementSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      plain.erase(std::unique(plain.begin(), plain.end()), plain.end());
      // Drop sets implied by a smaller one after filtering (bitset subset test).
      const std::size_t words = (n + 63) / 64;
      auto bits = [&](const ElementSet& s) {
        std::vector<std::uint64_t> b(words, 0);
        for (ElementId e : s) b[e / 64] |= std::uint64_t{1} << (e % 64);
        return b;
      };
      std::vector<ElementSet> kept;
      std::vector<std::vector<std::uint64_t>> kept_bits;
      for (auto& s : plain) {
        auto sb = bits(s);
        bool implied = false;
        for (std::size_t k = 0; k < kept.size() && !implied; ++k) {
          if (kept[k].size() >= s.size()) continue;
          bool subset = true;
          for (std::size_t w = 0; w < words && subset; ++w)
            if (kept_bits[k][w] & ~sb[w]) subset = false;
          implied = subset;
        }
        if (!implied) {
          kept.push_back(std::move(s));
          kept_bits.push_back(std::move(sb));
        }
      }
      for (auto& s : kept) {
        sets_.push_back(std::move(s));
        is_group_.push_back(false);
      }

      occ_.assign(n, {});
      for (std::size_t s = 0; s < sets_.size(); ++s)
        for (ElementId e : sets_[s]) occ_[e].push_back(static_cast<int>(s));
      status_.assign(n, 0);
      hit_.assign(sets_.size(), 0);
      free_.resize(sets_.size());
      for (std::size_t s = 0; s < sets_.size(); ++s) free_[s] = static_cast<int>(sets_[s].size());
      mark_.assign(n, 0);
      // Packing order: groups and small sets first.
      order_.resize(sets_.size());
      std::iota(order_.begin(), order_.end(), 0);
      std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
        if (is_group_[a] != is_group_[b]) return static_cast<bool>(is_group_[a]);
        return sets_[a].size() < sets_[b].size();
      });
      return true;
    }

    // Trail entries: element index; status is restored to free on undo.
    void include(ElementId e) {
      status_[e] = 1;
      trail_.push_back(e);
      cost_ += weight_[e];
      for (int s : occ_[e]) {
        ++hit_[s];
        --free_[s];
      }
      for (int g : group_of_[e])
        for (ElementId m : sets_[g])
          if (status_[m] == 0) exclude(m);
    }
    void exclude(ElementId e) {
      status_[e] = -1;
      trail_.push_back(e);
      for (int s : occ_[e]) --free_[s];
    }
    void undo_to(std::size_t mark) {
      while (trail_.size() > mark) {
        ElementId e = trail_.back();
        trail_.pop_back();
        if (status_[e] == 1) {
          cost_ -= weight_[e];
          for (int s : occ_[e]) {
            --hit_[s];
            ++free_[s];
          }
        } else {
          for (int s : occ_[e]) ++free_[s];
        }
        status_[e] = 0;
      }
    }

    bool group_violated() const {
      for (std::size_t s = 0; s < sets_.size(); ++s)
        if (is_group_[s] && hit_[s] > 1) return true;
      return false;
    }

    // Forces the last free element of unhit sets. False on a dead end.
    bool propagate_units() {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t s = 0; s < sets_.size(); ++s) {
          if (hit_[s] > 0) {
            if (is_group_[s] && hit_[s] > 1) return false;
            continue;
          }
          if (free_[s] == 0) return false;
          if (free_[s] == 1) {
            for (ElementId e : sets_[s])
              if (status_[e] == 0) {
                include(e);
                break;
              }
            changed = true;
          }
        }
      }
      return true;
    }

    // Lower bound on the cost still to pay; -1 when some unhit set has no
    // free element left.
    std::int64_t packing_bound() {
      ++stamp_;
      std::int64_t lb = 0;
      for (int s : order_) {
        if (hit_[s] > 0) continue;
        bool disjoint = true;
        std::int64_t cheapest = std::numeric_limits<std::int64_t>::max();
        for (ElementId e : sets_[s]) {
          if (status_[e] != 0) continue;
          if (mark_[e] == stamp_) {
            disjoint = false;
            break;
          }
          cheapest = std::min(cheapest, weight_[e]);
        }
        if (!disjoint) continue;
        if (cheapest == std::numeric_limits<std::int64_t>::max()) return -1;
        lb += cheapest;
        for (ElementId e : sets_[s])
          if (status_[e] == 0) mark_[e] = stamp_;
      }
      return lb;
    }

    bool pruned() {
      if (cost_ >= best_cost_) return true;
      std::int64_t lb = packing_bound();
      return lb < 0 || lb >= best_cost_ - cost_;
    }

    ElementSet current() const {
      ElementSet r;
      for (std::size_t e = 0; e < status_.size(); ++e)
        if (status_[e] == 1) r.push_back(e);
      return r;
    }

    bool all_hit() const {
      for (std::size_t s = 0; s < sets_.size(); ++s)
        if (hit_[s] == 0) return false;
      return true;
    }

    void try_incumbent(const ElementSet& cand, bool warm) {
      std::int64_t c = 0;
      for (ElementId e : cand) {
        if (e >= weight_.size() || weight_[e] < 0) return;
        c += weight_[e];
      }
      if (c >= best_cost_) return;
      for (std::size_t s = 0; s < sets_.size(); ++s) {
        std::size_t k = set_intersection(sets_[s], cand).size();
        if (k == 0 || (is_group_[s] && k != 1)) return;
      }
      best_cost_ = c;
      best_ = cand;
      if (warm) warm_ = true;
    }

    // Greedy completion, trying each member of the first group in turn.
    void greedy_bound() {
      std::vector<ElementId> starts;
      int first_group = -1;
      for (std::size_t s = 0; s < sets_.size(); ++s)
        if (is_group_[s]) {
          first_group = static_cast<int>(s);
          break;
        }
      if (first_group >= 0) {
        starts = sets_[first_group];
        std::stable_sort(starts.begin(), starts.end(),
                         [&](ElementId a, ElementId b) { return weight_[a] < weight_[b]; });
        if (starts.size() > 256) starts.resize(256);
      }
      auto run_from = [&](std::optional<ElementId> start) {
        std::size_t mark = trail_.size();
        if (start) include(*start);
        std::vector<double> score(weight_.size(), 0.0);
        while (propagate_units() && !all_hit()) {
          std::fill(score.begin(), score.end(), 0.0);
          for (std::size_t s = 0; s < sets_.size(); ++s) {
            if (hit_[s] > 0) continue;
            for (ElementId e : sets_[s])
              if (status_[e] == 0) score[e] += 1.0;
          }
          ElementId pick = weight_.size();
          double best_ratio = -1;
          for (std::size_t e = 0; e < weight_.size(); ++e) {
            if (score[e] == 0.0) continue;
            double ratio = score[e] / (static_cast<double>(weight_[e]) + 1e-9);
            if (ratio > best_ratio) {
              best_ratio = ratio;
              pick = e;
            }
          }
          if (pick == weight_.size()) break;
          include(pick);
        }
        if (all_hit() && !group_violated() && cost_ < best_cost_) try_incumbent(current(), false);
        undo_to(mark);
      };
      if (starts.empty())
        run_from(std::nullopt);
      else
        for (ElementId s : starts) run_from(s);
    }

    void dfs(int depth) {
      if ((++nodes_ & 1023) == 0) deadline_.check();
      std::size_t mark = trail_.size();
      if (!propagate_units()) {
        undo_to(mark);
        return;
      }
      if (pruned()) {
        undo_to(mark);
        return;
      }
      // Branch on an unhit group first, else the unhit set with fewest free.
      int pick = -1;
      for (std::size_t s = 0; s < sets_.size(); ++s) {
        if (hit_[s] > 0) continue;
        if (pick < 0 || (is_group_[s] && !is_group_[pick]) ||
            (is_group_[s] == is_group_[pick] && free_[s] < free_[pick]))
          pick = static_cast<int>(s);
      }
      if (pick < 0) {
        best_cost_ = cost_;
        best_ = current();
        undo_to(mark);
        return;
      }
      std::vector<ElementId> cands;
      for (ElementId e : sets_[pick])
        if (status_[e] == 0) cands.push_back(e);
      std::stable_sort(cands.begin(), cands.end(),
                       [&](ElementId a, ElementId b) { return weight_[a] < weight_[b]; });
      for (ElementId e : cands) {
        if (status_[e] != 0) continue;
        std::size_t before = trail_.size();
        include(e);
        dfs(depth + 1);
        undo_to(before);
        exclude(e);
        if (pruned()) break;
      }
      undo_to(mark);
    }

    const HittingSetSolver& hs_;
    const Deadline& deadline_;
    std::vector<std::int64_t> weight_;  // -1 marks INF (unselectable)
    std::vector<ElementSet> sets_;
    std::vector<char> is_group_;
    std::vector<std::vector<int>> group_of_;
    std::vector<std::vector<int>> occ_;
    std::vector<int> order_;
    std::vector<signed char> status_;
    std::vector<int> hit_;
    std::vector<int> free_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<ElementId> trail_;
    std::int64_t cost_ = 0;
    std::int64_t limit_ = kNoLimit;
    std::int64_t best_cost_ = kNoLimit;
    std::optional<ElementSet> best_;
    std::uint64_t nodes_ = 0;
    bool warm_ = false;
  };

  CostModel costs_;
  StructuralConstraint p_;
  std::vector<ElementSet> sets_;
  std::optional<ElementSet> last_;
  HsStats stats_;
  TieBreak tie_break_ = TieBreak::FirstFound;
};

}  // namespace ocus
