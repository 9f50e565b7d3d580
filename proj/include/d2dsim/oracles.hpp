#pragma once

#include <cstddef>
#include <optional>

#include "d2dsim/allocation.hpp"

// Reference computations that share no code path with the closed forms in
// allocation.hpp. Used by the validate command and the test suites.
namespace d2dsim::oracle {

struct GridOptimum {
  double p_cu_mw = 0.0;
  double p_d2d_mw = 0.0;
  double sum_rate_bpshz = 0.0;
};

/// Best sum rate over a points x points lattice on [0,P_max^d] x [0,P_max^c]
/// restricted to points meeting both thresholds exactly (no slack).
std::optional<GridOptimum> grid_best_power(const PairGains& g, const SinrThresholds& t,
                                           const PowerLimits& limits, std::size_t points = 201);

/// Whether any power point satisfies both thresholds inside the box.
/// Scans a points x points lattice first; if that finds nothing, refines by
/// interval bisection, discarding cells where one constraint cannot hold
/// anywhere in the cell.
bool grid_feasible(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits,
                   std::size_t points = 401);

}  // namespace d2dsim::oracle
