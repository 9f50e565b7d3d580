#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "d2dsim/allocation.hpp"
#include "d2dsim/geometry_channel.hpp"
#include "d2dsim/matching.hpp"
#include "d2dsim/qos.hpp"

namespace d2dsim {

struct ScenarioConfig {
  CellLayout layout;
  PathlossModel pathloss;
  PairDistanceRange d2d_pair;
  PowerLimits limits;
  TrafficParams traffic;
  double total_bandwidth_hz = 4.0e6;
  std::size_t n_cu = 10;
  std::vector<std::size_t> d2d_counts;
  std::size_t n_drops = 100;
  std::uint64_t base_seed = 1;
  bool allow_unprofitable_reuse = true;
  bool allow_full_reuse = true;

  double channel_bandwidth_hz() const { return total_bandwidth_hz / static_cast<double>(n_cu); }
  void validate() const;
};

struct ChannelMetrics {
  std::size_t cu = 0;
  std::optional<std::size_t> d2d;
  double p_cu_mw = 0.0;
  double p_d2d_mw = 0.0;
  double sinr_cu = 0.0;
  double sinr_d2d = 0.0;
  double rate_bpshz = 0.0;  // CU rate plus the reusing D2D's rate, if any

  friend bool operator==(const ChannelMetrics&, const ChannelMetrics&) = default;
};

struct TrialMetrics {
  std::uint64_t seed = 0;
  // Band-normalised: sum over channels of rate * W / B.
  double sum_spectral_efficiency_bpshz = 0.0;
  double channel_rate_sum_bpshz = 0.0;
  double total_delta_bpshz = 0.0;
  std::size_t offered_d2d_count = 0;
  std::size_t served_d2d_count = 0;
  std::size_t unserved_d2d_count = 0;
  std::vector<ChannelMetrics> channels;

  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

struct TrialRecord {
  std::size_t m_d2d = 0;
  std::size_t drop_index = 0;
  std::uint64_t seed = 0;
  double sum_bpshz = 0.0;
  std::size_t served = 0;
  std::size_t unserved = 0;
};

struct SweepPoint {
  std::size_t m_d2d = 0;
  double mean_bpshz = 0.0;
  double std_bpshz = 0.0;
  double min_bpshz = 0.0;
  double max_bpshz = 0.0;
  double mean_served = 0.0;
  double mean_channel_rate_bpshz = 0.0;
};

struct SweepResult {
  std::string scenario;
  std::string label;
  std::size_t n_cu = 0;
  std::vector<SweepPoint> points;
  std::vector<TrialRecord> trials;  // ordered by (m index, drop index)
};

/// A matched pair broke one of the allocation constraints.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kBaselineScenario = 0;
inline constexpr std::uint64_t kSlicedScenario = 1;

/// Seed for drop `drop_index` of a scenario. Independent of the D2D count so
/// every m in a sweep sees the same CU layout and the same first pairs.
std::uint64_t drop_seed(std::uint64_t base_seed, std::uint64_t scenario_id,
                        std::size_t drop_index);

/// Allocation, matching and metrics for one drop whose gains are given.
TrialMetrics evaluate_drop(const ScenarioConfig& cfg, const GainTable& gains);

/// Checks every matched pair against both SINR thresholds, both power limits
/// and exclusivity. Throws ConstraintViolation.
void audit_trial(const TrialMetrics& trial, const GainTable& gains, const SinrThresholds& t,
                 const PowerLimits& limits);

TrialMetrics run_trial(const ScenarioConfig& cfg, std::size_t m_d2d, std::uint64_t seed);

/// `threads` = 0 picks the hardware concurrency. Results do not depend on it.
SweepResult run_sweep(const ScenarioConfig& cfg, std::uint64_t scenario_id = kBaselineScenario,
                      std::string scenario_name = "baseline", std::size_t threads = 0);

/// Baseline: n_cu channels of B/n_cu. Sliced: 2*n_cu channels of B/(2*n_cu).
std::pair<SweepResult, SweepResult> run_slicing_comparison(const ScenarioConfig& cfg,
                                                           std::size_t threads = 0);

/// Topology of one drop with m_d2d pairs; shorter pair lists are prefixes.
Topology drop_topology(const ScenarioConfig& cfg, std::size_t m_d2d, std::uint64_t seed);

}  // namespace d2dsim
