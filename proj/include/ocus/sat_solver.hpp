#pragma once

// A small CDCL SAT solver with an assumption interface.
//
// Two watched literals, first-UIP learning with recursive minimisation,
// VSIDS on a binary heap (ties broken by lower variable index), Luby
// restarts and LBD-based clause database reduction. Decision polarity is a
// user preference where one is set, phase saving otherwise.

#include <ocus/types.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace ocus::sat {

// Internal literal encoding: 2*var + (negative ? 1 : 0), var >= 0.
struct Lit {
  std::uint32_t x = 0;
  static Lit make(int var, bool negative) {
    return Lit{static_cast<std::uint32_t>(2 * var + (negative ? 1 : 0))};
  }
  int var() const { return static_cast<int>(x >> 1); }
  bool negative() const { return x & 1u; }
  Lit operator~() const { return Lit{x ^ 1u}; }
  bool operator==(const Lit&) const = default;
};

enum class LBool : std::int8_t { False = 0, True = 1, Undef = 2 };

inline LBool operator^(LBool v, bool flip) {
  if (v == LBool::Undef) return v;
  return static_cast<LBool>(static_cast<int>(v) ^ static_cast<int>(flip));
}

enum class Status { Sat, Unsat };

class Solver {
 public:
  explicit Solver(std::uint64_t seed = 0) : rng_(seed), seeded_(seed != 0) {}

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  int new_var() {
    int v = num_vars();
    assigns_.push_back(LBool::Undef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(seeded_ ? std::uniform_real_distribution<double>(0, 1e-5)(rng_) : 0.0);
    saved_phase_.push_back(true);  // negative by default
    user_phase_.push_back(LBool::Undef);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
  }
  void ensure_vars(int n) {
    while (num_vars() < n) new_var();
  }

  // Preferred decision value for `var` (true = positive).
  void set_polarity(int var, bool value) {
    user_phase_[var] = value ? LBool::True : LBool::False;
  }
  void clear_polarity(int var) { user_phase_[var] = LBool::Undef; }

  // Adds a permanent clause. Returns false if the formula became UNSAT.
  bool add_clause(std::vector<Lit> lits) {
    if (!ok_) return false;
    cancel_until(0);
    std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) { return a.x < b.x; });
    std::vector<Lit> out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      Lit l = lits[i];
      if (value(l) == LBool::True) return true;
      if (i + 1 < lits.size() && lits[i + 1] == ~l) return true;  // tautology
      if (value(l) == LBool::False) continue;
      if (!out.empty() && out.back() == l) continue;
      out.push_back(l);
    }
    if (out.empty()) return ok_ = false;
    if (out.size() == 1) {
      assign(out[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    std::uint32_t cref = alloc_clause(out, false, 0);
    attach(cref);
    return true;
  }

  Status solve(std::span<const Lit> assumptions = {},
               const Deadline& deadline = Deadline::never()) {
    model_.clear();
    if (!ok_) return Status::Unsat;
    assumptions_.assign(assumptions.begin(), assumptions.end());
    Status result = Status::Unsat;
    int restart = 0;
    for (;;) {
      std::uint64_t budget = luby(restart++) * 100;
      LBool r = search(budget, deadline);
      if (r == LBool::True) {
        result = Status::Sat;
        break;
      }
      if (r == LBool::False) break;
    }
    if (result == Status::Sat) {
      model_.resize(num_vars());
      for (int v = 0; v < num_vars(); ++v) model_[v] = assigns_[v] == LBool::True;
    }
    cancel_until(0);
    return result;
  }

  // Value of `var` in the last model.
  bool model_value(int var) const { return model_.at(var); }
  const std::vector<bool>& model() const { return model_; }
  bool okay() const { return ok_; }

  std::uint64_t conflicts() const { return stats_conflicts_; }

 private:
  static constexpr std::uint32_t kNoReason = 0xffffffffu;

  struct ClauseHeader {
    std::uint32_t size;
    std::uint32_t lbd;
    float activity;
    bool learnt;
    bool deleted;
  };
  struct Watcher {
    std::uint32_t cref;
    Lit blocker;
  };

  // Clause storage: header index -> literals range.
  struct StoredClause {
    ClauseHeader h;
    std::vector<Lit> lits;
  };

  LBool value(Lit l) const { return assigns_[l.var()] ^ l.negative(); }
  LBool value_var(int v) const { return assigns_[v]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  std::uint32_t alloc_clause(const std::vector<Lit>& lits, bool learnt, std::uint32_t lbd) {
    std::uint32_t cref;
    if (!free_slots_.empty()) {
      cref = free_slots_.back();
      free_slots_.pop_back();
    } else {
      cref = static_cast<std::uint32_t>(clauses_.size());
      clauses_.emplace_back();
    }
    StoredClause& c = clauses_[cref];
    c.h = {static_cast<std::uint32_t>(lits.size()), lbd, 0.0f, learnt, false};
    c.lits = lits;
    if (learnt) learnts_.push_back(cref);
    return cref;
  }

  void attach(std::uint32_t cref) {
    const auto& c = clauses_[cref].lits;
    watches_[(~c[0]).x].push_back({cref, c[1]});
    watches_[(~c[1]).x].push_back({cref, c[0]});
  }

  void assign(Lit l, std::uint32_t reason) {
    assigns_[l.var()] = l.negative() ? LBool::False : LBool::True;
    level_[l.var()] = decision_level();
    reason_[l.var()] = reason;
    trail_.push_back(l);
  }

  // Returns the conflicting clause or kNoReason.
  std::uint32_t propagate() {
    std::uint32_t confl = kNoReason;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      auto& ws = watches_[p.x];
      std::size_t i = 0, j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        Watcher w = ws[i];
        if (value(w.blocker) == LBool::True) {
          ws[j++] = ws[i++];
          continue;
        }
        StoredClause& sc = clauses_[w.cref];
        if (sc.h.deleted) {
          ++i;
          continue;
        }
        auto& c = sc.lits;
        Lit false_lit = ~p;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        Lit first = c[0];
        Watcher nw{w.cref, first};
        if (first != w.blocker && value(first) == LBool::True) {
          ws[j++] = nw;
          continue;
        }
        bool found = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != LBool::False) {
            std::swap(c[1], c[k]);
            watches_[(~c[1]).x].push_back(nw);
            found = true;
            break;
          }
        }
        if (found) continue;
        ws[j++] = nw;
        if (value(first) == LBool::False) {
          confl = w.cref;
          qhead_ = trail_.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          assign(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  void analyze(std::uint32_t confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
    int path_c = 0;
    Lit p{0};
    bool have_p = false;
    out_learnt.clear();
    out_learnt.push_back(Lit{0});
    std::size_t index = trail_.size();
    do {
      StoredClause& c = clauses_[confl];
      if (c.h.learnt) bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        int v = q.var();
        if (!seen_[v] && level_[v] > 0) {
          bump_var(v);
          seen_[v] = 1;
          if (level_[v] >= decision_level())
            ++path_c;
          else
            out_learnt.push_back(q);
        }
      }
      while (!seen_[trail_[--index].var()]) {
      }
      p = trail_[index];
      have_p = true;
      confl = reason_[p.var()];
      seen_[p.var()] = 0;
      --path_c;
    } while (path_c > 0);
    out_learnt[0] = ~p;

    // Recursive minimisation.
    analyze_toclear_ = out_learnt;
    std::uint32_t abstract = 0;
    for (std::size_t k = 1; k < out_learnt.size(); ++k)
      abstract |= 1u << (level_[out_learnt[k].var()] & 31);
    std::size_t j = 1;
    for (std::size_t k = 1; k < out_learnt.size(); ++k) {
      int v = out_learnt[k].var();
      if (reason_[v] == kNoReason || !lit_redundant(out_learnt[k], abstract))
        out_learnt[j++] = out_learnt[k];
    }
    out_learnt.resize(j);

    if (out_learnt.size() == 1) {
      out_btlevel = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < out_learnt.size(); ++k)
        if (level_[out_learnt[k].var()] > level_[out_learnt[max_i].var()]) max_i = k;
      std::swap(out_learnt[1], out_learnt[max_i]);
      out_btlevel = level_[out_learnt[1].var()];
    }
    for (Lit l : analyze_toclear_) seen_[l.var()] = 0;
  }

  bool lit_redundant(Lit p, std::uint32_t abstract) {
    analyze_stack_.clear();
    analyze_stack_.push_back(p);
    std::size_t top = analyze_toclear_.size();
    while (!analyze_stack_.empty()) {
      Lit q = analyze_stack_.back();
      analyze_stack_.pop_back();
      std::uint32_t r = reason_[q.var()];
      auto& c = clauses_[r].lits;
      // Implied literal sits at position 0 for reason clauses.
      for (std::size_t k = 0; k < c.size(); ++k) {
        Lit l = c[k];
        int v = l.var();
        if (v == q.var()) continue;
        if (!seen_[v] && level_[v] > 0) {
          if (reason_[v] != kNoReason && (abstract & (1u << (level_[v] & 31)))) {
            seen_[v] = 1;
            analyze_stack_.push_back(l);
            analyze_toclear_.push_back(l);
          } else {
            for (std::size_t t = top; t < analyze_toclear_.size(); ++t)
              seen_[analyze_toclear_[t].var()] = 0;
            analyze_toclear_.resize(top);
            return false;
          }
        }
      }
    }
    return true;
  }

  std::uint32_t compute_lbd(const std::vector<Lit>& lits) {
    ++lbd_stamp_;
    std::uint32_t n = 0;
    for (Lit l : lits) {
      int lv = level_[l.var()];
      if (lbd_seen_.size() <= static_cast<std::size_t>(lv)) lbd_seen_.resize(lv + 1, 0);
      if (lbd_seen_[lv] != lbd_stamp_) {
        lbd_seen_[lv] = lbd_stamp_;
        ++n;
      }
    }
    return n;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
      int v = trail_[c].var();
      assigns_[v] = LBool::Undef;
      reason_[v] = kNoReason;
      saved_phase_[v] = trail_[c].negative();
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    qhead_ = trail_.size();
    trail_lim_.resize(level);
  }

  LBool search(std::uint64_t conflict_budget, const Deadline& deadline) {
    std::uint64_t conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
      std::uint32_t confl = propagate();
      if (confl != kNoReason) {
        ++conflicts;
        ++stats_conflicts_;
        if ((stats_conflicts_ & 255) == 0) deadline.check();
        if (decision_level() == 0) {
          ok_ = false;
          return LBool::False;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          assign(learnt[0], kNoReason);
        } else {
          std::uint32_t lbd = compute_lbd(learnt);
          std::uint32_t cref = alloc_clause(learnt, true, lbd);
          attach(cref);
          bump_clause(clauses_[cref]);
          assign(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        continue;
      }
      if (conflicts >= conflict_budget) {
        cancel_until(0);
        return LBool::Undef;
      }
      if (decision_level() == 0 && learnts_.size() > max_learnts_) reduce_db();

      Lit next{0};
      bool have_next = false;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        Lit a = assumptions_[decision_level()];
        if (value(a) == LBool::True) {
          trail_lim_.push_back(trail_.size());  // dummy level
        } else if (value(a) == LBool::False) {
          return LBool::False;  // UNSAT under assumptions
        } else {
          next = a;
          have_next = true;
          break;
        }
      }
      if (!have_next) {
        if ((++stats_decisions_ & 1023) == 0) deadline.check();
        int v = pick_branch_var();
        if (v < 0) return LBool::True;
        bool neg = user_phase_[v] != LBool::Undef ? user_phase_[v] == LBool::False
                                                  : saved_phase_[v];
        next = Lit::make(v, neg);
      }
      trail_lim_.push_back(trail_.size());
      assign(next, kNoReason);
    }
  }

  void reduce_db() {
    // Keep glue clauses; drop the worse half of the rest.
    std::vector<std::uint32_t> cand;
    std::vector<std::uint32_t> keep;
    for (std::uint32_t cref : learnts_) {
      const StoredClause& c = clauses_[cref];
      if (c.h.deleted) continue;
      if (c.h.lbd <= 2 || locked(cref))
        keep.push_back(cref);
      else
        cand.push_back(cref);
    }
    std::sort(cand.begin(), cand.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto& ca = clauses_[a].h;
      const auto& cb = clauses_[b].h;
      if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
      if (ca.activity != cb.activity) return ca.activity < cb.activity;
      return a < b;
    });
    std::size_t drop = cand.size() / 2;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (k < drop) {
        remove_clause(cand[k]);
      } else {
        keep.push_back(cand[k]);
      }
    }
    learnts_ = std::move(keep);
    max_learnts_ = max_learnts_ + max_learnts_ / 10;
  }

  bool locked(std::uint32_t cref) const {
    const auto& c = clauses_[cref].lits;
    int v = c[0].var();
    return reason_[v] == cref && value(c[0]) == LBool::True;
  }

  void remove_clause(std::uint32_t cref) {
    StoredClause& c = clauses_[cref];
    for (int k = 0; k < 2; ++k) {
      auto& ws = watches_[(~c.lits[k]).x];
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [cref](const Watcher& w) { return w.cref == cref; }),
               ws.end());
    }
    c.h.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    free_slots_.push_back(cref);
  }

  // VSIDS heap ---------------------------------------------------------------
  bool heap_less(int a, int b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }
  void heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }
  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void heap_down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  int heap_pop() {
    int v = heap_[0];
    heap_pos_[v] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      heap_down(0);
    }
    return v;
  }
  int pick_branch_var() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[v] == LBool::Undef) return v;
    }
    return -1;
  }
  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }
  void bump_clause(StoredClause& c) {
    c.h.activity += static_cast<float>(cla_inc_);
    if (c.h.activity > 1e20f) {
      for (std::uint32_t cref : learnts_) clauses_[cref].h.activity *= 1e-20f;
      cla_inc_ *= 1e-20;
    }
  }

  static std::uint64_t luby(int x) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < static_cast<std::uint64_t>(x) + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != static_cast<std::uint64_t>(x)) {
      size = (size - 1) >> 1;
      --seq;
      x = static_cast<int>(x % size);
    }
    return std::uint64_t{1} << seq;
  }

  std::mt19937_64 rng_;
  bool seeded_;
  bool ok_ = true;

  std::vector<LBool> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<double> activity_;
  std::vector<bool> saved_phase_;  // true = negative
  std::vector<LBool> user_phase_;
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<StoredClause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::uint32_t> free_slots_;
  std::size_t max_learnts_ = 4000;

  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<Lit> assumptions_;

  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;
  std::vector<std::uint32_t> lbd_seen_;
  std::uint32_t lbd_stamp_ = 0;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::uint64_t stats_conflicts_ = 0;
  std::uint64_t stats_decisions_ = 0;

  std::vector<bool> model_;
};

// DIMACS literal -> internal literal over variable index var-1.
inline Lit to_internal(Literal l) { return Lit::make(l.var() - 1, !l.positive()); }

}  // namespace ocus::sat
