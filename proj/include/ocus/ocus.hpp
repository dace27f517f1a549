#pragma once

// Umbrella header for the whole library.

#include <ocus/types.hpp>
#include <ocus/formula.hpp>
#include <ocus/sat_solver.hpp>
#include <ocus/oracle.hpp>
#include <ocus/maxsat.hpp>
#include <ocus/hitting_set.hpp>
#include <ocus/mus.hpp>
#include <ocus/corr_subsets.hpp>
#include <ocus/engine.hpp>
#include <ocus/explain.hpp>
