#pragma once

// Weighted formulas over indexed elements and the explanation cost model.

#include <ocus/types.hpp>

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace ocus {

enum class Partition { Constraint, Fact, NegLit };

inline const char* to_string(Partition p) {
  switch (p) {
    case Partition::Constraint: return "constraint";
    case Partition::Fact: return "fact";
    case Partition::NegLit: return "neglit";
  }
  return "?";
}

struct Element {
  Clause clause;
  Partition tag;
  // For constraints: the index into the originating constraint list.
  // For facts and negated literals: unused (the clause is the unit).
  std::size_t origin = 0;
};

struct WeightedClause {
  Clause clause;
  Weight weight;
};

// Element index -> weight.
class CostModel {
 public:
  CostModel() = default;
  explicit CostModel(std::vector<Weight> w) : weights_(std::move(w)) {}

  std::size_t size() const { return weights_.size(); }
  Weight operator[](ElementId e) const { return weights_.at(e); }
  void set(ElementId e, Weight w) {
    if (e >= weights_.size())
      throw InvalidInputError("unknown element " + std::to_string(e));
    weights_[e] = w;
  }
  std::span<const Weight> weights() const { return weights_; }
  void push_back(Weight w) { weights_.push_back(w); }

  // Sum of member weights; INF absorbs.
  Weight cost(const ElementSet& subset) const {
    Weight total = 0;
    for (ElementId e : subset) {
      if (e >= weights_.size())
        throw InvalidInputError("unknown element " + std::to_string(e));
      total += weights_[e];
    }
    return total;
  }

 private:
  std::vector<Weight> weights_;
};

inline Weight subset_cost(const CostModel& costs, const ElementSet& subset) {
  return costs.cost(subset);
}

// Indexed clause store: constraints, fact units and negated-literal units,
// each with a weight. Indices never change once an element is added.
class WeightedFormula {
 public:
  ElementId add(Clause c, Partition tag, Weight w, std::size_t origin = 0) {
    if (tag != Partition::Constraint && !c.is_unit())
      throw InvalidInputError("fact and negated-literal elements must be units");
    num_vars_ = std::max(num_vars_, c.max_var());
    elements_.push_back({std::move(c), tag, origin});
    costs_.push_back(w);
    return elements_.size() - 1;
  }

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const Element& operator[](ElementId e) const { return elements_.at(e); }
  std::span<const Element> elements() const { return elements_; }
  int num_vars() const { return num_vars_; }
  void reserve_vars(int n) { num_vars_ = std::max(num_vars_, n); }

  const CostModel& costs() const { return costs_; }
  Weight weight(ElementId e) const { return costs_[e]; }
  void set_weight(ElementId e, Weight w) { costs_.set(e, w); }
  Weight cost(const ElementSet& s) const { return costs_.cost(s); }

  ElementSet all() const {
    ElementSet r(elements_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i;
    return r;
  }
  ElementSet with_tag(Partition tag) const {
    ElementSet r;
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].tag == tag) r.push_back(i);
    return r;
  }
  // Elements whose current weight is finite.
  ElementSet selectable() const {
    ElementSet r;
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (!costs_[i].is_inf()) r.push_back(i);
    return r;
  }
  ElementSet complement(const ElementSet& s) const {
    return set_difference(all(), s);
  }

  // Unit element of the given partition carrying `l`, if any.
  std::optional<ElementId> find_unit(Partition tag, Literal l) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].tag == tag && elements_[i].clause.front() == l &&
          elements_[i].clause.is_unit())
        return i;
    return std::nullopt;
  }

 private:
  std::vector<Element> elements_;
  CostModel costs_;
  int num_vars_ = 0;
};

// {~l | l in iend \ i}
inline Interpretation negated_remaining(const Interpretation& iend,
                                        const Interpretation& i) {
  if (!i.subset_of(iend))
    throw InvalidInputError("interpretation is not a subset of the end interpretation");
  std::vector<Literal> neg;
  for (Literal l : iend.minus(i)) neg.push_back(~l);
  return Interpretation(std::move(neg));
}

// Per-element weights for the explanation cost model. Constraint weights come
// with the constraints themselves; facts and negated literals use these.
struct LiteralCosts {
  Weight fact = 1;
  Weight neg_lit = 1;
};

// C /\ I /\ ~(Iend \ I): constraints first (in order), then facts, then the
// negated remaining literals, each group in ascending literal order.
inline WeightedFormula build_step_formula(std::span<const WeightedClause> constraints,
                                          const Interpretation& i,
                                          const Interpretation& iend,
                                          LiteralCosts lc = {}) {
  WeightedFormula f;
  for (std::size_t k = 0; k < constraints.size(); ++k)
    f.add(constraints[k].clause, Partition::Constraint, constraints[k].weight, k);
  for (Literal l : i) f.add(Clause::unit(l), Partition::Fact, lc.fact);
  for (Literal l : negated_remaining(iend, i))
    f.add(Clause::unit(l), Partition::NegLit, lc.neg_lit);
  f.reserve_vars(iend.empty() ? 0 : iend.literals().back().var());
  return f;
}

// C /\ I /\ ~l for a single literal to explain.
inline WeightedFormula build_literal_formula(std::span<const WeightedClause> constraints,
                                             const Interpretation& i,
                                             Literal to_explain,
                                             LiteralCosts lc = {}) {
  WeightedFormula f;
  for (std::size_t k = 0; k < constraints.size(); ++k)
    f.add(constraints[k].clause, Partition::Constraint, constraints[k].weight, k);
  for (Literal l : i) f.add(Clause::unit(l), Partition::Fact, lc.fact);
  f.add(Clause::unit(~to_explain), Partition::NegLit, lc.neg_lit);
  return f;
}

// Whole-sequence formula C /\ Iend /\ ~(Iend \ I0), used by the persistent
// hitting-set mode. Facts not yet derived and negated literals already
// derived carry INF; the driver updates them as the sequence advances.
inline WeightedFormula build_sequence_formula(std::span<const WeightedClause> constraints,
                                              const Interpretation& i0,
                                              const Interpretation& iend,
                                              LiteralCosts lc = {}) {
  WeightedFormula f;
  for (std::size_t k = 0; k < constraints.size(); ++k)
    f.add(constraints[k].clause, Partition::Constraint, constraints[k].weight, k);
  for (Literal l : iend)
    f.add(Clause::unit(l), Partition::Fact, i0.contains(l) ? lc.fact : Weight::inf());
  for (Literal l : negated_remaining(iend, i0))
    f.add(Clause::unit(l), Partition::NegLit, lc.neg_lit);
  return f;
}

// Per-literal variant of the sequence formula: C /\ Iend /\ ~l.
inline WeightedFormula build_literal_sequence_formula(
    std::span<const WeightedClause> constraints, const Interpretation& i,
    const Interpretation& iend, Literal to_explain, LiteralCosts lc = {}) {
  WeightedFormula f;
  for (std::size_t k = 0; k < constraints.size(); ++k)
    f.add(constraints[k].clause, Partition::Constraint, constraints[k].weight, k);
  for (Literal l : iend)
    f.add(Clause::unit(l), Partition::Fact, i.contains(l) ? lc.fact : Weight::inf());
  f.add(Clause::unit(~to_explain), Partition::NegLit, lc.neg_lit);
  return f;
}

// Position of an element in the order shared by all step, literal and
// sequence formulas: constraints by index, then facts, then negated literals,
// each by literal. Equally cheap explanations are ranked by comparing the
// sorted keys of their elements lexicographically.
using ElementKey = std::tuple<int, std::size_t, Literal>;

inline ElementKey element_key(const Element& e) {
  switch (e.tag) {
    case Partition::Constraint: return {0, e.origin, Literal()};
    case Partition::Fact: return {1, 0, e.clause.literals()[0]};
    case Partition::NegLit: return {2, 0, e.clause.literals()[0]};
  }
  return {3, 0, Literal()};
}

inline std::vector<ElementKey> canonical_key(const WeightedFormula& f, const ElementSet& subset) {
  std::vector<ElementKey> keys;
  keys.reserve(subset.size());
  for (ElementId e : subset) keys.push_back(element_key(f[e]));
  std::sort(keys.begin(), keys.end());
  return keys;
}

// Literals carried by the fact elements of `subset`.
inline Interpretation facts_of(const WeightedFormula& f, const ElementSet& subset) {
  std::vector<Literal> lits;
  for (ElementId e : subset)
    if (f[e].tag == Partition::Fact) lits.push_back(f[e].clause.front());
  return Interpretation(std::move(lits));
}

inline std::vector<std::size_t> constraints_of(const WeightedFormula& f,
                                               const ElementSet& subset) {
  std::vector<std::size_t> idx;
  for (ElementId e : subset)
    if (f[e].tag == Partition::Constraint) idx.push_back(f[e].origin);
  return idx;
}

// The literals (l, not ~l) whose negation appears as a NegLit in `subset`.
inline std::vector<Literal> targets_of(const WeightedFormula& f, const ElementSet& subset) {
  std::vector<Literal> lits;
  for (ElementId e : subset)
    if (f[e].tag == Partition::NegLit) lits.push_back(~f[e].clause.front());
  return lits;
}

}  // namespace ocus
