#pragma once

#include <ocus/oracle.hpp>

namespace ocus {

// Deletion-based MUS extraction. Elements are tried for removal in ascending
// index order, so the result is deterministic for a given input.
inline ElementSet mus_deletion(const ElementSet& subset, SatOracle& oracle,
                               const Deadline& deadline = Deadline::never()) {
  ElementSet core = make_set(subset);
  if (oracle.is_sat(core, deadline))
    throw InvalidInputError("MUS extraction needs an unsatisfiable subset");
  for (ElementId e : ElementSet(core)) {
    ElementSet without;
    without.reserve(core.size());
    for (ElementId x : core)
      if (x != e) without.push_back(x);
    if (!oracle.is_sat(without, deadline)) core = std::move(without);
  }
  return core;
}

inline ElementSet mus_deletion(const ElementSet& subset, const WeightedFormula& f) {
  SatOracle oracle(f);
  return mus_deletion(subset, oracle);
}

}  // namespace ocus
