#include "d2dsim/geometry_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "d2dsim/random.hpp"

namespace d2dsim {
namespace {

enum StreamTag : std::uint64_t {
  kCuStream = 1,
  kD2dStream = 2,
  kLinkCuBs = 10,
  kLinkD2d = 11,
  kLinkCuD2d = 12,
  kLinkD2dBs = 13,
};

Point2 uniform_in_disk(Engine& eng, Point2 center, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(eng));
  const double theta = 2.0 * std::numbers::pi * unit(eng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

bool finite(double v) { return std::isfinite(v); }

struct LinkDraw {
  double shadowing_std_db;
  bool fading;
};

double draw_gain(double deterministic_db, LinkDraw draw,
                 std::initializer_list<std::uint64_t> keys) {
  double gain_db = deterministic_db;
  double fading = 1.0;
  if (draw.shadowing_std_db > 0.0 || draw.fading) {
    Engine eng = keyed_engine(keys);
    if (draw.shadowing_std_db > 0.0) {
      std::normal_distribution<double> shadow(0.0, draw.shadowing_std_db);
      gain_db -= shadow(eng);
    }
    if (draw.fading) {
      std::exponential_distribution<double> rayleigh_power(1.0);
      fading = rayleigh_power(eng);
    }
  }
  return std::pow(10.0, gain_db / 10.0) * fading;
}

void check_gain(double g, const char* family, std::size_t a, std::size_t b) {
  if (finite(g) && g > 0.0) return;
  std::ostringstream msg;
  msg << "non-finite or non-positive gain on link " << family << "[" << a;
  if (b != static_cast<std::size_t>(-1)) msg << "," << b;
  msg << "] (value " << g << ")";
  throw GainError(msg.str());
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void CellLayout::validate() const {
  if (!(radius_m > 0.0)) throw TopologyError("cell radius must be > 0");
  if (!(bs_antenna_height_m > 0.0) || !(ue_antenna_height_m > 0.0))
    throw TopologyError("antenna heights must be > 0");
  for (double v : {bs_antenna_gain_db, ue_antenna_gain_db, bs_noise_figure_db,
                   ue_noise_figure_db, bs_position.x, bs_position.y}) {
    if (!finite(v)) throw TopologyError("antenna gains and noise figures must be finite");
  }
  if (!(carrier_frequency_hz > 0.0)) throw TopologyError("carrier frequency must be > 0");
}

void PathlossModel::validate() const {
  if (!(cellular_pl_exponent_coeff > 0.0) || !(d2d_pl_exponent_coeff > 0.0))
    throw TopologyError("pathloss exponent coefficients must be > 0");
  if (!(cellular_shadowing_std_db >= 0.0) || !(d2d_shadowing_std_db >= 0.0))
    throw TopologyError("shadowing standard deviations must be >= 0");
  if (!finite(cellular_pl_intercept_db) || !finite(d2d_pl_intercept_db))
    throw TopologyError("pathloss intercepts must be finite");
}

Topology generate_topology(const CellLayout& layout, std::size_t n_cu,
                           std::size_t n_d2d, PairDistanceRange pair_range,
                           std::uint64_t seed, bool full_reuse) {
  layout.validate();
  if (n_cu < 1) throw TopologyError("at least one cellular user is required");
  if (n_d2d > n_cu || (n_d2d == n_cu && !full_reuse)) {
    std::ostringstream msg;
    msg << "n_d2d=" << n_d2d << " with n_cu=" << n_cu
        << " violates the reuse-partner assumption M < N"
        << (n_d2d == n_cu ? " (set full reuse to allow M = N)" : "");
    throw TopologyError(msg.str());
  }
  if (!(pair_range.min_m > 0.0) || !(pair_range.min_m <= pair_range.max_m) ||
      !(pair_range.max_m < layout.radius_m))
    throw TopologyError("D2D pair distance range must satisfy 0 < min <= max < radius");

  Topology topo;
  topo.rng_seed = seed;
  topo.cu_positions.reserve(n_cu);
  topo.d2d_tx_positions.reserve(n_d2d);
  topo.d2d_rx_positions.reserve(n_d2d);

  Engine cu_eng = keyed_engine({seed, kCuStream});
  for (std::size_t i = 0; i < n_cu; ++i)
    topo.cu_positions.push_back(uniform_in_disk(cu_eng, layout.bs_position, layout.radius_m));

  Engine d2d_eng = keyed_engine({seed, kD2dStream});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> pair_dist(pair_range.min_m, pair_range.max_m);
  for (std::size_t j = 0; j < n_d2d; ++j) {
    const Point2 tx = uniform_in_disk(d2d_eng, layout.bs_position, layout.radius_m);
    Point2 rx;
    do {
      const double d = pair_dist(d2d_eng);
      const double theta = 2.0 * std::numbers::pi * unit(d2d_eng);
      rx = {tx.x + d * std::cos(theta), tx.y + d * std::sin(theta)};
    } while (distance(rx, layout.bs_position) > layout.radius_m);
    topo.d2d_tx_positions.push_back(tx);
    topo.d2d_rx_positions.push_back(rx);
  }
  return topo;
}

double link_gain_db(double distance_m, double pl_intercept_db, double pl_exponent_coeff,
                    double tx_antenna_gain_db, double rx_antenna_gain_db,
                    double rx_noise_figure_db) {
  const double d_km = std::max(distance_m, kMinLinkDistanceM) / 1000.0;
  const double pathloss_db = pl_intercept_db + pl_exponent_coeff * std::log10(d_km);
  return -pathloss_db + tx_antenna_gain_db + rx_antenna_gain_db - rx_noise_figure_db;
}

GainTable compute_gains(const CellLayout& layout, const Topology& topo,
                        const PathlossModel& model, std::uint64_t seed) {
  layout.validate();
  model.validate();
  if (topo.d2d_tx_positions.size() != topo.d2d_rx_positions.size())
    throw TopologyError("D2D transmitter and receiver lists differ in length");

  const std::size_t n = topo.n_cu();
  const std::size_t m = topo.n_d2d();
  const Point2 bs = layout.bs_position;
  const LinkDraw cellular{model.cellular_shadowing_std_db, model.fast_fading_enabled};
  const LinkDraw direct{model.d2d_shadowing_std_db, model.fast_fading_enabled};
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Uplink to the BS uses the cellular model; UE-to-UE links use the D2D model.
  auto uplink_db = [&](Point2 ue) {
    return link_gain_db(distance(ue, bs), model.cellular_pl_intercept_db,
                        model.cellular_pl_exponent_coeff, layout.ue_antenna_gain_db,
                        layout.bs_antenna_gain_db, layout.bs_noise_figure_db);
  };
  auto sidelink_db = [&](Point2 tx, Point2 rx) {
    return link_gain_db(distance(tx, rx), model.d2d_pl_intercept_db,
                        model.d2d_pl_exponent_coeff, layout.ue_antenna_gain_db,
                        layout.ue_antenna_gain_db, layout.ue_noise_figure_db);
  };

  GainTable gains;
  gains.g_cu_bs.resize(n);
  gains.g_d2d.resize(m);
  gains.h_d2d_bs.resize(m);
  gains.h_cu_d2d.resize(n * m);

  for (std::size_t i = 0; i < n; ++i) {
    gains.g_cu_bs[i] = draw_gain(uplink_db(topo.cu_positions[i]), cellular,
                                 {seed, kLinkCuBs, i});
    check_gain(gains.g_cu_bs[i], "g_cu_bs", i, kNone);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const Point2 tx = topo.d2d_tx_positions[j];
    const Point2 rx = topo.d2d_rx_positions[j];
    gains.g_d2d[j] = draw_gain(sidelink_db(tx, rx), direct, {seed, kLinkD2d, j});
    check_gain(gains.g_d2d[j], "g_d2d", j, kNone);
    gains.h_d2d_bs[j] = draw_gain(uplink_db(tx), cellular, {seed, kLinkD2dBs, j});
    check_gain(gains.h_d2d_bs[j], "h_d2d_bs", j, kNone);
    for (std::size_t i = 0; i < n; ++i) {
      double& h = gains.h_cu_to_d2d(i, j);
      h = draw_gain(sidelink_db(topo.cu_positions[i], rx), direct, {seed, kLinkCuD2d, i, j});
      check_gain(h, "h_cu_d2d", i, j);
    }
  }
  return gains;
}

}  // namespace d2dsim
