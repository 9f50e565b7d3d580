#include "d2dsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "d2dsim/matching.hpp"
#include "d2dsim/oracles.hpp"
#include "d2dsim/qos.hpp"
#include "d2dsim/random.hpp"
#include "d2dsim/units.hpp"

namespace d2dsim {
namespace {

constexpr double kTotalBandwidthHz = 4.0e6;

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

void record(PropertyResult& p, std::uint64_t seed, const std::string& failure) {
  ++p.checked;
  if (failure.empty()) return;
  if (p.failures++ == 0) {
    p.first_failing_seed = seed;
    p.first_failure = failure;
  }
}

}  // namespace

Instance random_instance(std::uint64_t seed, std::size_t max_cu, std::size_t max_d2d) {
  Engine eng = keyed_engine({seed, 0xA11CE});
  std::uniform_int_distribution<std::size_t> pick_n(1, std::max<std::size_t>(max_cu, 1));
  const std::size_t n = pick_n(eng);
  std::uniform_int_distribution<std::size_t> pick_m(0, std::min(max_d2d, n));
  const std::size_t m = pick_m(eng);

  const CellLayout layout{};
  const PathlossModel model{};
  const Topology topo = generate_topology(layout, n, m, PairDistanceRange{}, seed, true);

  Instance inst;
  inst.seed = seed;
  inst.gains = compute_gains(layout, topo, model, seed);
  inst.thresholds = thresholds(make_qos(TrafficParams{}, kTotalBandwidthHz / static_cast<double>(n)));
  inst.limits = {dbm_to_mw(23.0), dbm_to_mw(23.0), dbm_to_mw(-114.0)};
  return inst;
}

std::vector<AdmissiblePair> random_admissible_pairs(std::uint64_t seed, std::size_t count) {
  std::vector<AdmissiblePair> out;
  out.reserve(count);
  for (std::uint64_t s = seed; out.size() < count; ++s) {
    const Instance inst = random_instance(s, 8, 8);
    for (std::size_t j = 0; j < inst.gains.n_d2d() && out.size() < count; ++j) {
      for (std::size_t i = 0; i < inst.gains.n_cu() && out.size() < count; ++i) {
        const PairGains g = pair_gains(inst.gains, i, j);
        if (admissible_point(g, inst.thresholds, inst.limits))
          out.push_back({s, g, inst.thresholds, inst.limits});
      }
    }
  }
  return out;
}

std::string check_point_a(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits,
                          double rel_tol) {
  const auto a = admissible_point(g, t, limits);
  if (!a) return "pair not admissible";
  const double sc = cu_sinr(g, a->p_cu_A_mw, a->p_d2d_A_mw, limits.noise_mw);
  const double sd = d2d_sinr(g, a->p_cu_A_mw, a->p_d2d_A_mw, limits.noise_mw);
  if (rel_err(sc, t.cu) > rel_tol || rel_err(sd, t.d2d) > rel_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "point A SINRs (" << sc << ", " << sd << ") vs thresholds (" << t.cu << ", " << t.d2d
        << ")";
    return msg.str();
  }
  return {};
}

std::string check_corner_optimality(const PairGains& g, const SinrThresholds& t,
                                    const PowerLimits& limits, std::size_t grid_points,
                                    double tolerance_bpshz) {
  const PowerPair p = optimal_power(g, t, limits);
  std::ostringstream msg;
  msg.precision(17);
  if (!satisfies_constraints(g, t, limits, p.p_cu_mw, p.p_d2d_mw)) {
    msg << "optimal point (" << p.p_cu_mw << ", " << p.p_d2d_mw << ") violates a constraint";
    return msg.str();
  }
  const double at_max = std::max(p.p_cu_mw / limits.p_max_cu_mw, p.p_d2d_mw / limits.p_max_d2d_mw);
  if (std::abs(at_max - 1.0) > 1e-9) {
    msg << "neither power at its maximum (ratio " << at_max << ")";
    return msg.str();
  }
  const auto grid = oracle::grid_best_power(g, t, limits, grid_points);
  if (grid && p.sum_rate_bpshz < grid->sum_rate_bpshz - tolerance_bpshz) {
    msg << "corner optimum " << p.sum_rate_bpshz << " below grid optimum " << grid->sum_rate_bpshz;
    return msg.str();
  }
  return {};
}

bool ValidationReport::passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed(); });
}

ValidationReport run_validation(const ValidationOptions& options) {
  PropertyResult point_a;
  point_a.name = "point_a_exactness";
  PropertyResult corner;
  corner.name = "corner_optimality_vs_grid";
  PropertyResult admission;
  admission.name = "admissibility_vs_grid";
  PropertyResult weights_prop;
  weights_prop.name = "delta_weights";
  PropertyResult matching;
  matching.name = "matching_vs_brute_force";

  for (std::size_t k = 0; k < options.instances; ++k) {
    const std::uint64_t seed = options.seed + k;
    const Instance inst = random_instance(seed, options.max_cu, options.max_d2d);
    const GainTable& gains = inst.gains;
    const SinrThresholds& t = inst.thresholds;
    const PowerLimits& limits = inst.limits;

    for (std::size_t j = 0; j < gains.n_d2d(); ++j) {
      for (std::size_t i = 0; i < gains.n_cu(); ++i) {
        const PairGains g = pair_gains(gains, i, j);
        const bool admissible = admissible_point(g, t, limits).has_value();
        const bool feasible = oracle::grid_feasible(g, t, limits);
        std::ostringstream pair_id;
        pair_id << "pair (cu " << i << ", d2d " << j << "): ";
        record(admission, seed,
               admissible == feasible
                   ? std::string{}
                   : pair_id.str() + (admissible ? "admitted but grid finds no feasible point"
                                                 : "rejected but grid finds a feasible point"));
        if (!admissible) continue;
        const std::string a = check_point_a(g, t, limits);
        record(point_a, seed, a.empty() ? a : pair_id.str() + a);
        const std::string c = check_corner_optimality(g, t, limits);
        record(corner, seed, c.empty() ? c : pair_id.str() + c);
      }
    }

    const CandidateSets candidates = reuse_candidates(gains, t, limits);
    WeightMatrix w = build_weights(candidates, gains, limits);
    if (options.inject_delta_sign_flip) {
      for (std::size_t i = 0; i < w.n_cu(); ++i)
        for (std::size_t j = 0; j < w.n_d2d(); ++j)
          if (w.is_candidate(i, j)) w.set(i, j, -w.delta(i, j));
    }

    // Reference increments straight from the gains and the chosen powers.
    WeightMatrix reference(gains.n_cu(), gains.n_d2d());
    std::string weight_failure;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      for (const ReuseCandidate& c : candidates[j]) {
        const PairGains g = pair_gains(gains, c.cu, j);
        const double noise = limits.noise_mw;
        const double ref =
            std::log2(1.0 + c.power.p_cu_mw * g.g_cu_bs / (noise + c.power.p_d2d_mw * g.h_d2d_bs)) +
            std::log2(1.0 + c.power.p_d2d_mw * g.g_d2d / (noise + c.power.p_cu_mw * g.h_cu_d2d)) -
            std::log2(1.0 + limits.p_max_cu_mw * g.g_cu_bs / noise);
        reference.set(c.cu, j, ref);
        if (weight_failure.empty() &&
            (!w.is_candidate(c.cu, j) || std::abs(w.delta(c.cu, j) - ref) > 1e-9)) {
          std::ostringstream msg;
          msg << "delta(cu " << c.cu << ", d2d " << j << ") = " << w.delta(c.cu, j)
              << ", reference " << ref;
          weight_failure = msg.str();
        }
      }
    }
    record(weights_prop, seed, weight_failure);

    const Assignment fast = hungarian_match(w);
    const Assignment exact = brute_force_match(reference);
    const double fast_total = assignment_weight(reference, fast);
    std::string match_failure;
    if (std::abs(fast_total - exact.total_weight_bpshz) > 1e-9 ||
        fast.d2d_to_cu != exact.d2d_to_cu) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "hungarian total " << fast_total << " vs brute force " << exact.total_weight_bpshz;
      match_failure = msg.str();
    }
    record(matching, seed, match_failure);
  }

  return {{point_a, corner, admission, weights_prop, matching}};
}

}  // namespace d2dsim
