#include "d2dsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "d2dsim/random.hpp"
#include "d2dsim/units.hpp"

namespace d2dsim {
namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Lowest failing index wins so the reported error is thread-count independent.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SweepPoint summarize(std::size_t m, const std::vector<TrialMetrics>& trials) {
  SweepPoint p;
  p.m_d2d = m;
  const double n = static_cast<double>(trials.size());
  double sum = 0.0, served = 0.0, per_channel = 0.0;
  p.min_bpshz = trials.front().sum_spectral_efficiency_bpshz;
  p.max_bpshz = p.min_bpshz;
  for (const TrialMetrics& t : trials) {
    sum += t.sum_spectral_efficiency_bpshz;
    served += static_cast<double>(t.served_d2d_count);
    per_channel += t.channel_rate_sum_bpshz / static_cast<double>(t.channels.size());
    p.min_bpshz = std::min(p.min_bpshz, t.sum_spectral_efficiency_bpshz);
    p.max_bpshz = std::max(p.max_bpshz, t.sum_spectral_efficiency_bpshz);
  }
  p.mean_bpshz = sum / n;
  p.mean_served = served / n;
  p.mean_channel_rate_bpshz = per_channel / n;
  if (trials.size() > 1) {
    double ss = 0.0;
    for (const TrialMetrics& t : trials) {
      const double d = t.sum_spectral_efficiency_bpshz - p.mean_bpshz;
      ss += d * d;
    }
    p.std_bpshz = std::sqrt(ss / (n - 1.0));
  }
  return p;
}

}  // namespace

void ScenarioConfig::validate() const {
  layout.validate();
  pathloss.validate();
  limits.validate();
  if (n_cu < 1) throw std::invalid_argument("n_cu must be >= 1");
  if (n_drops < 1) throw std::invalid_argument("n_drops must be >= 1");
  if (!(total_bandwidth_hz > 0.0)) throw std::invalid_argument("total bandwidth must be > 0");
  for (std::size_t m : d2d_counts) {
    if (m > n_cu || (m == n_cu && !allow_full_reuse)) {
      std::ostringstream msg;
      msg << "d2d count " << m << " with n_cu " << n_cu
          << " violates the reuse-partner assumption M < N"
          << (m == n_cu ? " (enable allow_full_reuse for M = N)" : "");
      throw std::invalid_argument(msg.str());
    }
  }
}

std::uint64_t drop_seed(std::uint64_t base_seed, std::uint64_t scenario_id,
                        std::size_t drop_index) {
  return derive_seed({base_seed, scenario_id, static_cast<std::uint64_t>(drop_index)});
}

TrialMetrics evaluate_drop(const ScenarioConfig& cfg, const GainTable& gains) {
  const QosSpec qos = make_qos(cfg.traffic, cfg.channel_bandwidth_hz());
  const SinrThresholds t = thresholds(qos);
  const PowerLimits& limits = cfg.limits;

  const CandidateSets candidates = reuse_candidates(gains, t, limits);
  WeightMatrix weights = build_weights(candidates, gains, limits);
  if (!cfg.allow_unprofitable_reuse) exclude_unprofitable(weights);
  const Assignment assignment = hungarian_match(weights);

  TrialMetrics out;
  out.offered_d2d_count = gains.n_d2d();
  out.served_d2d_count = assignment.served();
  out.unserved_d2d_count = out.offered_d2d_count - out.served_d2d_count;
  out.total_delta_bpshz = assignment.total_weight_bpshz;
  out.channels.resize(gains.n_cu());

  for (std::size_t i = 0; i < gains.n_cu(); ++i) {
    ChannelMetrics& ch = out.channels[i];
    ch.cu = i;
    ch.p_cu_mw = limits.p_max_cu_mw;
    ch.sinr_cu = limits.p_max_cu_mw * gains.g_cu_bs[i] / limits.noise_mw;
    ch.rate_bpshz = shannon_bpshz(ch.sinr_cu);
  }
  for (std::size_t j = 0; j < assignment.d2d_to_cu.size(); ++j) {
    if (!assignment.d2d_to_cu[j]) continue;
    const std::size_t i = *assignment.d2d_to_cu[j];
    const auto it = std::find_if(candidates[j].begin(), candidates[j].end(),
                                 [i](const ReuseCandidate& c) { return c.cu == i; });
    const PairGains g = pair_gains(gains, i, j);
    ChannelMetrics& ch = out.channels[i];
    ch.d2d = j;
    ch.p_cu_mw = it->power.p_cu_mw;
    ch.p_d2d_mw = it->power.p_d2d_mw;
    ch.sinr_cu = cu_sinr(g, ch.p_cu_mw, ch.p_d2d_mw, limits.noise_mw);
    ch.sinr_d2d = d2d_sinr(g, ch.p_cu_mw, ch.p_d2d_mw, limits.noise_mw);
    ch.rate_bpshz = shannon_bpshz(ch.sinr_cu) + shannon_bpshz(ch.sinr_d2d);
  }

  const double share = cfg.channel_bandwidth_hz() / cfg.total_bandwidth_hz;
  for (const ChannelMetrics& ch : out.channels) out.channel_rate_sum_bpshz += ch.rate_bpshz;
  out.sum_spectral_efficiency_bpshz = out.channel_rate_sum_bpshz * share;

  audit_trial(out, gains, t, limits);
  return out;
}

void audit_trial(const TrialMetrics& trial, const GainTable& gains, const SinrThresholds& t,
                 const PowerLimits& limits) {
  std::vector<char> d2d_seen(gains.n_d2d(), 0);
  for (const ChannelMetrics& ch : trial.channels) {
    if (!ch.d2d) continue;
    const std::size_t j = *ch.d2d;
    std::ostringstream where;
    where << "seed " << trial.seed << ", cu " << ch.cu << ", d2d " << j << ": ";
    if (j >= gains.n_d2d() || d2d_seen[j]++)
      throw ConstraintViolation(where.str() + "D2D pair reuses more than one channel");
    const PairGains g = pair_gains(gains, ch.cu, j);
    if (!satisfies_constraints(g, t, limits, ch.p_cu_mw, ch.p_d2d_mw)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << where.str() << "SINR/power constraint violated (p_cu=" << ch.p_cu_mw
          << " mW, p_d2d=" << ch.p_d2d_mw << " mW, sinr_cu="
          << cu_sinr(g, ch.p_cu_mw, ch.p_d2d_mw, limits.noise_mw)
          << ", sinr_d2d=" << d2d_sinr(g, ch.p_cu_mw, ch.p_d2d_mw, limits.noise_mw) << ")";
      throw ConstraintViolation(msg.str());
    }
  }
}

Topology drop_topology(const ScenarioConfig& cfg, std::size_t m_d2d, std::uint64_t seed) {
  return generate_topology(cfg.layout, cfg.n_cu, m_d2d, cfg.d2d_pair, seed,
                           cfg.allow_full_reuse);
}

TrialMetrics run_trial(const ScenarioConfig& cfg, std::size_t m_d2d, std::uint64_t seed) {
  const Topology topo = drop_topology(cfg, m_d2d, seed);
  const GainTable gains = compute_gains(cfg.layout, topo, cfg.pathloss, seed);
  TrialMetrics out = evaluate_drop(cfg, gains);
  out.seed = seed;
  return out;
}

SweepResult run_sweep(const ScenarioConfig& cfg, std::uint64_t scenario_id,
                      std::string scenario_name, std::size_t threads) {
  cfg.validate();
  const std::size_t n_points = cfg.d2d_counts.size();
  std::vector<TrialMetrics> trials(n_points * cfg.n_drops);
  parallel_for(trials.size(), threads, [&](std::size_t k) {
    const std::size_t m = cfg.d2d_counts[k / cfg.n_drops];
    const std::size_t drop = k % cfg.n_drops;
    trials[k] = run_trial(cfg, m, drop_seed(cfg.base_seed, scenario_id, drop));
  });

  SweepResult result;
  result.scenario = std::move(scenario_name);
  result.n_cu = cfg.n_cu;
  for (std::size_t p = 0; p < n_points; ++p) {
    const auto first = trials.begin() + static_cast<std::ptrdiff_t>(p * cfg.n_drops);
    std::vector<TrialMetrics> block(first, first + static_cast<std::ptrdiff_t>(cfg.n_drops));
    result.points.push_back(summarize(cfg.d2d_counts[p], block));
    for (std::size_t d = 0; d < cfg.n_drops; ++d) {
      const TrialMetrics& t = block[d];
      result.trials.push_back({cfg.d2d_counts[p], d, t.seed, t.sum_spectral_efficiency_bpshz,
                               t.served_d2d_count, t.unserved_d2d_count});
    }
  }
  return result;
}

std::pair<SweepResult, SweepResult> run_slicing_comparison(const ScenarioConfig& cfg,
                                                           std::size_t threads) {
  ScenarioConfig sliced = cfg;
  sliced.n_cu = cfg.n_cu * 2;
  return {run_sweep(cfg, kBaselineScenario, "baseline", threads),
          run_sweep(sliced, kSlicedScenario, "sliced", threads)};
}

}  // namespace d2dsim
