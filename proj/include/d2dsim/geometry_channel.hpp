#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dsim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b);

struct CellLayout {
  double radius_m = 500.0;
  Point2 bs_position{};
  double bs_antenna_height_m = 25.0;
  double ue_antenna_height_m = 1.5;
  double bs_antenna_gain_db = 8.0;
  double ue_antenna_gain_db = 3.0;
  double bs_noise_figure_db = 5.0;
  double ue_noise_figure_db = 9.0;
  double carrier_frequency_hz = 2.0e9;

  void validate() const;
};

struct Topology {
  std::vector<Point2> cu_positions;
  std::vector<Point2> d2d_tx_positions;
  std::vector<Point2> d2d_rx_positions;
  std::uint64_t rng_seed = 0;

  std::size_t n_cu() const { return cu_positions.size(); }
  std::size_t n_d2d() const { return d2d_tx_positions.size(); }

  friend bool operator==(const Topology&, const Topology&) = default;
};

// Pathloss in dB = intercept + coeff * log10(d_km).
struct PathlossModel {
  double cellular_pl_intercept_db = 128.1;
  double cellular_pl_exponent_coeff = 37.6;
  double d2d_pl_intercept_db = 148.0;
  double d2d_pl_exponent_coeff = 40.0;
  double cellular_shadowing_std_db = 8.0;
  double d2d_shadowing_std_db = 10.0;
  bool fast_fading_enabled = false;

  void validate() const;
};

/// Linear power gains for one drop. Antenna gains and receiver noise figure
/// are folded in, so SINR = P * gain / sigma^2 with a plain noise constant.
struct GainTable {
  std::vector<double> g_cu_bs;   // N: CU i -> BS
  std::vector<double> g_d2d;     // M: D2D j tx -> D2D j rx
  std::vector<double> h_cu_d2d;  // N x M row-major: CU i -> D2D j rx
  std::vector<double> h_d2d_bs;  // M: D2D j tx -> BS

  std::size_t n_cu() const { return g_cu_bs.size(); }
  std::size_t n_d2d() const { return g_d2d.size(); }

  double h_cu_to_d2d(std::size_t cu, std::size_t d2d) const {
    return h_cu_d2d[cu * n_d2d() + d2d];
  }
  double& h_cu_to_d2d(std::size_t cu, std::size_t d2d) {
    return h_cu_d2d[cu * n_d2d() + d2d];
  }

  friend bool operator==(const GainTable&, const GainTable&) = default;
};

struct PairDistanceRange {
  double min_m = 10.0;
  double max_m = 50.0;
};

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMinLinkDistanceM = 1.0;

/// Drops CUs and D2D transmitters uniformly over the cell disk and places
/// each D2D receiver at a uniform distance in the pair range from its
/// transmitter, resampling until it falls inside the cell.
///
/// D2D pairs are drawn sequentially from their own stream, so the first k
/// pairs do not depend on n_d2d. n_d2d == n_cu needs full_reuse; the
/// reuse-partner assumption otherwise requires n_d2d < n_cu.
Topology generate_topology(const CellLayout& layout, std::size_t n_cu,
                           std::size_t n_d2d, PairDistanceRange pair_range,
                           std::uint64_t seed, bool full_reuse = false);

/// Every draw (shadowing, fading) is keyed by (seed, link kind, endpoints),
/// so a link's gain does not depend on how many other links exist.
GainTable compute_gains(const CellLayout& layout, const Topology& topo,
                        const PathlossModel& model, std::uint64_t seed);

// Deterministic part of a link gain: pathloss and link budget only.
double link_gain_db(double distance_m, double pl_intercept_db,
                    double pl_exponent_coeff, double tx_antenna_gain_db,
                    double rx_antenna_gain_db, double rx_noise_figure_db);

}  // namespace d2dsim
