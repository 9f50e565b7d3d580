#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2dsim/allocation.hpp"
#include "d2dsim/geometry_channel.hpp"

namespace d2dsim {

/// One randomized allocation problem drawn from the default cell model.
struct Instance {
  std::uint64_t seed = 0;
  GainTable gains;
  SinrThresholds thresholds;
  PowerLimits limits;
};

/// Default reference cell: 500 m radius, 23 dBm limits, -114 dBm noise,
/// 4 MHz split over N channels. N in [1, max_cu], M in [0, min(max_d2d, N)].
Instance random_instance(std::uint64_t seed, std::size_t max_cu, std::size_t max_d2d);

struct AdmissiblePair {
  std::uint64_t seed = 0;
  PairGains gains;
  SinrThresholds thresholds;
  PowerLimits limits;
};

/// Collects `count` admissible (CU, D2D) pairs from successive random
/// instances starting at `seed`.
std::vector<AdmissiblePair> random_admissible_pairs(std::uint64_t seed, std::size_t count);

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::optional<std::uint64_t> first_failing_seed;
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

struct ValidationOptions {
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  std::size_t max_cu = 8;
  std::size_t max_d2d = 6;
  // Test hook: negate every increment handed to the Hungarian solver.
  bool inject_delta_sign_flip = false;
};

struct ValidationReport {
  std::vector<PropertyResult> properties;

  bool passed() const;
};

/// Instance k uses seed options.seed + k, so `--seed S --instances 1`
/// reproduces a reported failing instance.
ValidationReport run_validation(const ValidationOptions& options);

// Individual checks, exposed for the test suites. Each returns an empty
// string on success and a description of the first violation otherwise.
std::string check_point_a(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits,
                          double rel_tol = 1e-9);
std::string check_corner_optimality(const PairGains& g, const SinrThresholds& t,
                                    const PowerLimits& limits, std::size_t grid_points = 201,
                                    double tolerance_bpshz = 1e-3);

}  // namespace d2dsim
