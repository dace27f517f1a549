#pragma once

// Growing satisfiable subsets and extracting correction subsets from them.

#include <ocus/maxsat.hpp>
#include <ocus/oracle.hpp>

#include <string_view>

namespace ocus {

enum class GrowKind { None, Sat, SubsetMax, MaxSatDomain, MaxSatFull };

struct GrowStrategy {
  GrowKind kind = GrowKind::Sat;
  bool multi = false;

  bool operator==(const GrowStrategy&) const = default;

  std::string name() const {
    std::string base;
    switch (kind) {
      case GrowKind::None: return "none";
      case GrowKind::Sat: base = "sat"; break;
      case GrowKind::SubsetMax: base = "subsetmax"; break;
      case GrowKind::MaxSatDomain: base = multi ? "maxsat" : "maxsat-domain"; break;
      case GrowKind::MaxSatFull: base = "maxsat-full"; break;
    }
    return multi ? "multi-" + base : base;
  }

  static std::optional<GrowStrategy> parse(std::string_view s) {
    if (s == "none") return GrowStrategy{GrowKind::None, false};
    if (s == "sat") return GrowStrategy{GrowKind::Sat, false};
    if (s == "subsetmax") return GrowStrategy{GrowKind::SubsetMax, false};
    if (s == "maxsat-domain") return GrowStrategy{GrowKind::MaxSatDomain, false};
    if (s == "maxsat-full") return GrowStrategy{GrowKind::MaxSatFull, false};
    if (s == "multi-sat") return GrowStrategy{GrowKind::Sat, true};
    if (s == "multi-maxsat") return GrowStrategy{GrowKind::MaxSatDomain, true};
    if (s == "multi-subsetmax") return GrowStrategy{GrowKind::SubsetMax, true};
    return std::nullopt;
  }
};

namespace detail {

inline ElementSet grow_from_model(const ElementSet& s, const Model& m, SatOracle& oracle,
                                  GrowKind kind, const ElementSet* selectable,
                                  const Deadline& deadline) {
  const WeightedFormula& f = oracle.formula();
  switch (kind) {
    case GrowKind::None:
      return s;
    case GrowKind::Sat:
      return oracle.satisfied_by(m);
    case GrowKind::SubsetMax: {
      ElementSet grown = oracle.satisfied_by(m);
      std::vector<char> in(f.size(), 0);
      for (ElementId e : grown) in[e] = 1;
      for (ElementId c = 0; c < f.size(); ++c) {
        if (in[c]) continue;
        ElementSet trial = grown;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), c), c);
        SatResult r = oracle.check(trial, deadline);
        if (!r.sat) continue;
        grown = oracle.satisfied_by(*r.model);
        for (ElementId e : grown) in[e] = 1;
      }
      return grown;
    }
    case GrowKind::MaxSatDomain:
    case GrowKind::MaxSatFull: {
      MaxSatProblem p;
      p.hard = s;
      p.hint = oracle.hint();
      for (ElementId e = 0; e < f.size(); ++e) {
        if (set_contains(s, e)) continue;
        if (kind == GrowKind::MaxSatDomain) {
          if (f[e].tag == Partition::NegLit) continue;
          if (selectable && !set_contains(*selectable, e)) continue;
        }
        p.soft.push_back(e);
      }
      MaxSatSolution sol = maxsat_solve(p, f, deadline);
      return oracle.satisfied_by(sol.model);
    }
  }
  return s;
}

}  // namespace detail

// Extends satisfiable `s` to a larger satisfiable subset. `selectable`
// restricts the domain-MaxSAT soft clauses to elements the hitting-set
// solver may currently pick.
inline ElementSet grow(const ElementSet& s, SatOracle& oracle, GrowKind kind,
                       const ElementSet* selectable = nullptr,
                       const Deadline& deadline = Deadline::never()) {
  SatResult r = oracle.check(s, deadline);
  if (!r.sat) throw ContradictionError("cannot grow an unsatisfiable subset");
  return detail::grow_from_model(s, *r.model, oracle, kind, selectable, deadline);
}

// One or more correction subsets of the oracle's formula, each disjoint from
// `s`. With `multi`, keeps adding each complement (restricted to
// `projection` when given) to the seed until it becomes unsatisfiable.
inline std::vector<ElementSet> corr_subsets(const ElementSet& s, SatOracle& oracle,
                                            GrowStrategy strategy,
                                            const ElementSet* projection = nullptr,
                                            const Deadline& deadline = Deadline::never()) {
  const WeightedFormula& f = oracle.formula();
  std::vector<ElementSet> out;
  ElementSet seed = s;
  for (;;) {
    SatResult r = oracle.check(seed, deadline);
    if (!r.sat) {
      if (out.empty()) throw ContradictionError("correction subsets need a satisfiable seed");
      break;
    }
    ElementSet grown =
        detail::grow_from_model(seed, *r.model, oracle, strategy.kind, projection, deadline);
    ElementSet k = f.complement(grown);
    if (k.empty()) throw InvalidInputError("formula is satisfiable: no correction subset exists");
    if (!strategy.multi) {
      out.push_back(std::move(k));
      break;
    }
    ElementSet next = set_union(seed, k);
    if (projection) next = set_intersection(next, *projection);
    out.push_back(std::move(k));
    if (next == seed) break;
    seed = std::move(next);
  }
  return out;
}

}  // namespace ocus
