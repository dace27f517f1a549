#pragma once

// Core value types: literals, clauses, interpretations, weights, element sets.

#include <algorithm>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocus {

class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a formula that must be satisfiable turns out not to be.
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit exceeded") {}
};

// Wall-clock deadline; default-constructed deadlines never expire.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::time_point at) : at_(at) {}

  static Deadline after(std::chrono::duration<double> d) {
    return Deadline(Clock::now() +
                    std::chrono::duration_cast<Clock::duration>(d));
  }
  static Deadline never() { return Deadline(); }

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::optional<Clock::time_point> at_;
};

// A propositional literal in DIMACS notation: +v or -v with v >= 1.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(int var, bool positive) : code_(positive ? var : -var) {
    if (var < 1) throw InvalidInputError("literal variable must be >= 1");
  }

  static constexpr Literal from_dimacs(int code) {
    if (code == 0) throw InvalidInputError("0 is not a literal");
    return Literal(std::abs(code), code > 0);
  }

  constexpr int var() const { return code_ > 0 ? code_ : -code_; }
  constexpr bool positive() const { return code_ > 0; }
  constexpr int dimacs() const { return code_; }
  constexpr Literal operator~() const { return from_dimacs(-code_); }

  // Orders by variable first, then negative before positive.
  constexpr auto operator<=>(const Literal& o) const {
    if (var() != o.var()) return var() <=> o.var();
    return positive() <=> o.positive();
  }
  constexpr bool operator==(const Literal&) const = default;

 private:
  int code_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Literal l) {
  return os << l.dimacs();
}

// Sorted, duplicate-free disjunction of literals; never tautological.
class Clause {
 public:
  Clause() = default;
  Clause(std::initializer_list<Literal> lits) : Clause(std::vector(lits)) {}
  explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i)
      if (lits_[i].var() == lits_[i - 1].var())
        throw InvalidInputError("clause contains a literal and its negation");
  }

  static Clause from_dimacs(std::initializer_list<int> codes) {
    std::vector<Literal> lits;
    for (int c : codes) lits.push_back(Literal::from_dimacs(c));
    return Clause(std::move(lits));
  }
  static Clause unit(Literal l) { return Clause({l}); }

  std::span<const Literal> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool is_unit() const { return lits_.size() == 1; }
  Literal front() const { return lits_.front(); }
  int max_var() const { return lits_.empty() ? 0 : lits_.back().var(); }

  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause& o) const { return lits_ <=> o.lits_; }

 private:
  std::vector<Literal> lits_;
};

// A consistent set of literals (a partial assignment).
class Interpretation {
 public:
  Interpretation() = default;
  Interpretation(std::initializer_list<Literal> lits)
      : Interpretation(std::vector(lits)) {}
  explicit Interpretation(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i)
      if (lits_[i].var() == lits_[i - 1].var())
        throw InvalidInputError("inconsistent interpretation: contains x" +
                                std::to_string(lits_[i].var()) +
                                " and its negation");
  }

  static Interpretation from_dimacs(std::initializer_list<int> codes) {
    std::vector<Literal> lits;
    for (int c : codes) lits.push_back(Literal::from_dimacs(c));
    return Interpretation(std::move(lits));
  }

  std::span<const Literal> literals() const { return lits_; }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  std::vector<Literal> to_vector() const { return lits_; }
  int max_var() const {
    int n = 0;
    for (Literal l : lits_) n = std::max(n, l.var());
    return n;
  }

  bool contains(Literal l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
  }
  bool subset_of(const Interpretation& o) const {
    return std::includes(o.lits_.begin(), o.lits_.end(), lits_.begin(),
                         lits_.end());
  }

  // Literals of *this not in `o`.
  Interpretation minus(const Interpretation& o) const {
    Interpretation r;
    std::set_difference(lits_.begin(), lits_.end(), o.lits_.begin(),
                        o.lits_.end(), std::back_inserter(r.lits_));
    return r;
  }
  // Union; throws if the result is inconsistent.
  Interpretation merged(const Interpretation& o) const {
    std::vector<Literal> all;
    std::set_union(lits_.begin(), lits_.end(), o.lits_.begin(), o.lits_.end(),
                   std::back_inserter(all));
    return Interpretation(std::move(all));
  }

  bool operator==(const Interpretation&) const = default;

 private:
  std::vector<Literal> lits_;
};

inline std::ostream& operator<<(std::ostream& os, const Interpretation& i) {
  os << '{';
  const char* sep = "";
  for (Literal l : i) {
    os << sep << l;
    sep = ", ";
  }
  return os << '}';
}

// Non-negative integer cost or the absorbing sentinel INF.
class Weight {
 public:
  constexpr Weight() = default;
  constexpr Weight(std::int64_t v) : value_(v) {  // NOLINT(implicit)
    if (v < 0) throw InvalidInputError("weights must be non-negative");
  }
  static constexpr Weight inf() {
    Weight w;
    w.inf_ = true;
    return w;
  }

  constexpr bool is_inf() const { return inf_; }
  constexpr std::int64_t value() const {
    if (inf_) throw std::logic_error("value() of INF weight");
    return value_;
  }

  constexpr Weight operator+(Weight o) const {
    if (inf_ || o.inf_) return inf();
    return Weight(value_ + o.value_);
  }
  constexpr Weight& operator+=(Weight o) { return *this = *this + o; }

  constexpr std::strong_ordering operator<=>(const Weight& o) const {
    if (inf_ || o.inf_) return inf_ <=> o.inf_;
    return value_ <=> o.value_;
  }
  constexpr bool operator==(const Weight& o) const {
    return inf_ == o.inf_ && (inf_ || value_ == o.value_);
  }

 private:
  std::int64_t value_ = 0;
  bool inf_ = false;
};

inline std::ostream& operator<<(std::ostream& os, Weight w) {
  if (w.is_inf()) return os << "INF";
  return os << w.value();
}

inline std::string to_string(Weight w) {
  return w.is_inf() ? std::string("INF") : std::to_string(w.value());
}

// Elements are identified by their stable index into a WeightedFormula.
using ElementId = std::size_t;
// Sorted, duplicate-free list of element indices.
using ElementSet = std::vector<ElementId>;

inline ElementSet make_set(std::vector<ElementId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
  ElementSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(r));
  return r;
}

inline ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  ElementSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(r));
  return r;
}

inline bool set_contains(const ElementSet& s, ElementId e) {
  return std::binary_search(s.begin(), s.end(), e);
}

inline bool sets_intersect(const ElementSet& a, const ElementSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

}  // namespace ocus
