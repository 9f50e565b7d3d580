#include "d2dsim/allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "d2dsim/units.hpp"

namespace d2dsim {

void PowerLimits::validate() const {
  if (!(p_max_cu_mw > 0.0) || !(p_max_d2d_mw > 0.0) || !(noise_mw > 0.0))
    throw std::invalid_argument("power limits and noise power must be > 0");
}

PairGains pair_gains(const GainTable& gains, std::size_t cu, std::size_t d2d) {
  return {gains.g_cu_bs.at(cu), gains.g_d2d.at(d2d), gains.h_cu_to_d2d(cu, d2d),
          gains.h_d2d_bs.at(d2d)};
}

double cu_sinr(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw) {
  return p_cu_mw * g.g_cu_bs / (noise_mw + p_d2d_mw * g.h_d2d_bs);
}

double d2d_sinr(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw) {
  return p_d2d_mw * g.g_d2d / (noise_mw + p_cu_mw * g.h_cu_d2d);
}

double pair_sum_rate(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw) {
  return shannon_bpshz(cu_sinr(g, p_cu_mw, p_d2d_mw, noise_mw)) +
         shannon_bpshz(d2d_sinr(g, p_cu_mw, p_d2d_mw, noise_mw));
}

double cu_solo_rate(double g_cu_bs, const PowerLimits& limits) {
  return shannon_bpshz(limits.p_max_cu_mw * g_cu_bs / limits.noise_mw);
}

double min_cu_power(const PairGains& g, const SinrThresholds& t, double noise_mw) {
  return t.cu * noise_mw / g.g_cu_bs;
}

double min_d2d_power(const PairGains& g, const SinrThresholds& t, double noise_mw) {
  return t.d2d * noise_mw / g.g_d2d;
}

bool slope_condition(const PairGains& g, const SinrThresholds& t) {
  return g.g_d2d * g.g_cu_bs - t.cu * t.d2d * g.h_cu_d2d * g.h_d2d_bs > 0.0;
}

std::optional<FeasiblePoint> intersection_point(const PairGains& g, const SinrThresholds& t,
                                                double noise_mw) {
  if (!slope_condition(g, t)) return std::nullopt;
  const double denom = g.g_d2d * g.g_cu_bs - t.cu * t.d2d * g.h_cu_d2d * g.h_d2d_bs;
  const double p_cu = (g.g_d2d * t.cu + g.h_d2d_bs * t.cu * t.d2d) * noise_mw / denom;
  const double p_d2d = (g.g_cu_bs * t.d2d + g.h_cu_d2d * t.cu * t.d2d) * noise_mw / denom;
  if (!std::isfinite(p_cu) || !std::isfinite(p_d2d)) return std::nullopt;
  return FeasiblePoint{p_cu, p_d2d};
}

std::optional<FeasiblePoint> admissible_point(const PairGains& g, const SinrThresholds& t,
                                              const PowerLimits& limits) {
  auto a = intersection_point(g, t, limits.noise_mw);
  if (!a) return std::nullopt;
  const bool inside = a->p_cu_A_mw > 0.0 && a->p_cu_A_mw <= limits.p_max_cu_mw &&
                      a->p_d2d_A_mw > 0.0 && a->p_d2d_A_mw <= limits.p_max_d2d_mw;
  if (!inside) return std::nullopt;
  return a;
}

bool satisfies_constraints(const PairGains& g, const SinrThresholds& t,
                           const PowerLimits& limits, double p_cu_mw, double p_d2d_mw,
                           double rel_tol) {
  if (!(p_cu_mw > 0.0) || !(p_d2d_mw > 0.0)) return false;
  if (p_cu_mw > limits.p_max_cu_mw * (1.0 + rel_tol)) return false;
  if (p_d2d_mw > limits.p_max_d2d_mw * (1.0 + rel_tol)) return false;
  const double sc = cu_sinr(g, p_cu_mw, p_d2d_mw, limits.noise_mw);
  const double sd = d2d_sinr(g, p_cu_mw, p_d2d_mw, limits.noise_mw);
  return sc >= t.cu * (1.0 - rel_tol) && sd >= t.d2d * (1.0 - rel_tol);
}

PowerPair optimal_power(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits) {
  const double pc_max = limits.p_max_cu_mw;
  const double pd_max = limits.p_max_d2d_mw;
  const double noise = limits.noise_mw;

  // Power each side needs to hold its threshold against the other's power.
  const double pc_needed_at_pd_max = t.cu * (noise + pd_max * g.h_d2d_bs) / g.g_cu_bs;
  const double pd_needed_at_pc_max = t.d2d * (noise + pc_max * g.h_cu_d2d) / g.g_d2d;
  // Largest power the other side can run before breaking a threshold.
  const double pd_tolerated_at_pc_max = (pc_max * g.g_cu_bs / t.cu - noise) / g.h_d2d_bs;
  const double pc_tolerated_at_pd_max = (pd_max * g.g_d2d / t.d2d - noise) / g.h_cu_d2d;

  const std::array<std::pair<double, double>, 5> vertices{{
      {pc_max, pd_max},
      {pc_needed_at_pd_max, pd_max},
      {pc_max, pd_needed_at_pc_max},
      {pc_max, pd_tolerated_at_pc_max},
      {pc_tolerated_at_pd_max, pd_max},
  }};

  std::optional<PowerPair> best;
  for (auto [pc, pd] : vertices) {
    if (!std::isfinite(pc) || !std::isfinite(pd)) continue;
    if (!satisfies_constraints(g, t, limits, pc, pd)) continue;
    pc = std::min(pc, pc_max);
    pd = std::min(pd, pd_max);
    const double f = pair_sum_rate(g, pc, pd, noise);
    if (!best || f > best->sum_rate_bpshz ||
        (f == best->sum_rate_bpshz && pc > best->p_cu_mw)) {
      best = PowerPair{pc, pd, f};
    }
  }
  if (!best) throw AllocationError("optimal_power called on a pair with no feasible vertex");
  return *best;
}

CandidateSets reuse_candidates(const GainTable& gains, const SinrThresholds& t,
                               const PowerLimits& limits) {
  limits.validate();
  CandidateSets sets(gains.n_d2d());
  for (std::size_t j = 0; j < gains.n_d2d(); ++j) {
    for (std::size_t i = 0; i < gains.n_cu(); ++i) {
      const PairGains g = pair_gains(gains, i, j);
      if (!admissible_point(g, t, limits)) continue;
      sets[j].push_back({i, optimal_power(g, t, limits)});
    }
  }
  return sets;
}

}  // namespace d2dsim
