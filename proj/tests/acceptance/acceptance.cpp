// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "d2dsim/allocation.hpp"
#include "d2dsim/config.hpp"
#include "d2dsim/experiment.hpp"
#include "d2dsim/matching.hpp"
#include "d2dsim/qos.hpp"
#include "d2dsim/validation.hpp"

namespace fs = std::filesystem;
using namespace d2dsim;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %d %-28s %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig bundled(const char* name) {
  return load_config(fs::path(D2DSIM_SOURCE_DIR) / "configs" / name);
}

// Plain recomputation of every constraint on a matched channel, separate
// from the library's own audit.
std::string recheck(const TrialMetrics& trial, const GainTable& g, const SinrThresholds& t,
                    const PowerLimits& lim) {
  std::vector<int> d2d_uses(g.n_d2d(), 0);
  std::vector<int> cu_uses(g.n_cu(), 0);
  std::ostringstream err;
  for (const ChannelMetrics& ch : trial.channels) {
    ++cu_uses.at(ch.cu);
    if (!ch.d2d) continue;
    const std::size_t i = ch.cu, j = *ch.d2d;
    ++d2d_uses.at(j);
    const double pc = ch.p_cu_mw, pd = ch.p_d2d_mw;
    const double sc = pc * g.g_cu_bs[i] / (lim.noise_mw + pd * g.h_d2d_bs[j]);
    const double sd = pd * g.g_d2d[j] / (lim.noise_mw + pc * g.h_cu_to_d2d(i, j));
    if (sc < t.cu * (1 - 1e-9)) err << "cu sinr " << sc << " < " << t.cu << "; ";
    if (sd < t.d2d * (1 - 1e-9)) err << "d2d sinr " << sd << " < " << t.d2d << "; ";
    if (!(pc >= 0 && pc <= lim.p_max_cu_mw * (1 + 1e-12))) err << "cu power " << pc << "; ";
    if (!(pd >= 0 && pd <= lim.p_max_d2d_mw * (1 + 1e-12))) err << "d2d power " << pd << "; ";
  }
  for (int u : cu_uses)
    if (u != 1) err << "cu channel listed " << u << " times; ";
  for (int u : d2d_uses)
    if (u > 1) err << "d2d reuses " << u << " channels; ";
  return err.str();
}

std::size_t audit_sweep(const ScenarioConfig& cfg, const SweepResult& sweep, std::string& first) {
  const SinrThresholds t = thresholds(make_qos(cfg.traffic, cfg.channel_bandwidth_hz()));
  std::size_t violations = 0;
  for (const TrialRecord& rec : sweep.trials) {
    const GainTable g = compute_gains(cfg.layout, drop_topology(cfg, rec.m_d2d, rec.seed),
                                      cfg.pathloss, rec.seed);
    const TrialMetrics trial = evaluate_drop(cfg, g);
    std::string err = recheck(trial, g, t, cfg.limits);
    try {
      audit_trial(trial, g, t, cfg.limits);
    } catch (const ConstraintViolation& e) {
      err += e.what();
    }
    if (trial.sum_spectral_efficiency_bpshz != rec.sum_bpshz || trial.served_d2d_count != rec.served)
      err += "trial does not reproduce its recorded result";
    if (!err.empty()) {
      if (first.empty())
        first = sweep.scenario + " m=" + std::to_string(rec.m_d2d) + " drop " +
                std::to_string(rec.drop_index) + ": " + err;
      ++violations;
    }
  }
  return violations;
}

int run_cli(const std::string& args, const std::string& env) {
  const std::string cmd = env + " \"" D2DSIM_EXE "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  std::vector<SweepResult> audited;
  std::vector<ScenarioConfig> audited_cfg;

  report(1, "sinr_threshold_closed_form", [] {
    const QosSpec q = make_qos(TrafficParams{}, 4e6 / 10);
    const double frozen = 2.8863073459971584;
    const double rel = std::abs(q.sinr_min_cu - frozen) / frozen;
    std::ostringstream d;
    d.precision(12);
    d << "eps=" << q.sinr_min_cu << " (" << 10 * std::log10(q.sinr_min_cu) << " dB) rel err "
      << rel;
    return Outcome{rel <= 1e-6 && q.sinr_min_d2d == q.sinr_min_cu, d.str()};
  });

  report(2, "point_a_exactness", [] {
    const auto start = std::chrono::steady_clock::now();
    const auto pairs = random_admissible_pairs(20221, 1000);
    std::size_t bad = 0;
    std::string first;
    for (const AdmissiblePair& p : pairs) {
      const std::string e = check_point_a(p.gains, p.thresholds, p.limits, 1e-9);
      if (!e.empty() && bad++ == 0) first = e;
    }
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << pairs.size() << " pairs, " << bad << " off by >1e-9" << (first.empty() ? "" : ": ")
      << first;
    return Outcome{pairs.size() == 1000 && bad == 0 && secs < 1.0, d.str()};
  });

  report(3, "corner_optimality_vs_grid", [] {
    const auto start = std::chrono::steady_clock::now();
    const auto pairs = random_admissible_pairs(20223, 100);
    std::size_t bad = 0;
    std::string first;
    for (const AdmissiblePair& p : pairs) {
      const std::string e = check_corner_optimality(p.gains, p.thresholds, p.limits, 201, 1e-3);
      if (!e.empty() && bad++ == 0) first = e;
    }
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << pairs.size() << " pairs on a 201x201 grid, " << bad << " below grid-1e-3"
      << (first.empty() ? "" : ": ") << first;
    return Outcome{pairs.size() == 100 && bad == 0 && secs < 30.0, d.str()};
  });

  report(4, "hungarian_vs_enumeration", [] {
    const auto start = std::chrono::steady_clock::now();
    std::size_t weight_bad = 0, assign_bad = 0, served = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const Instance inst = random_instance(40000 + k, 8, 6);
      const WeightMatrix w =
          build_weights(reuse_candidates(inst.gains, inst.thresholds, inst.limits), inst.gains,
                        inst.limits);
      const Assignment fast = hungarian_match(w);
      const Assignment exact = brute_force_match(w);
      weight_bad += std::abs(fast.total_weight_bpshz - exact.total_weight_bpshz) > 1e-9;
      assign_bad += fast.d2d_to_cu != exact.d2d_to_cu;
      served += fast.served();
    }
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << "100 instances, " << served << " matched pairs, " << weight_bad << " weight and "
      << assign_bad << " assignment mismatches";
    return Outcome{weight_bad == 0 && assign_bad == 0 && secs < 60.0, d.str()};
  });

  report(5, "reuse_sweep_increasing", [&] {
    const RunConfig rc = bundled("table1.cfg");
    const auto start = std::chrono::steady_clock::now();
    SweepResult r = run_sweep(rc.scenario, kBaselineScenario, "baseline", 0);
    const double secs = seconds_since(start);
    bool increasing = r.points.size() == 11 && r.points.front().m_d2d == 0;
    std::ostringstream d;
    d.precision(4);
    d << std::fixed << "N=" << r.n_cu << ", " << rc.scenario.n_drops << " drops, means";
    for (std::size_t p = 0; p < r.points.size(); ++p) {
      d << ' ' << r.points[p].mean_bpshz;
      if (p > 0 && !(r.points[p].mean_bpshz > r.points[p - 1].mean_bpshz)) increasing = false;
    }
    d << ", sweep " << secs << " s";
    audited.push_back(std::move(r));
    audited_cfg.push_back(rc.scenario);
    return Outcome{increasing && secs < 60.0, d.str()};
  });

  report(6, "bandwidth_slicing", [&] {
    const RunConfig rc = bundled("slicing.cfg");
    auto [baseline, sliced] = run_slicing_comparison(rc.scenario, 0);
    const double wide_full = baseline.points.back().mean_bpshz;
    const double narrow_none = sliced.points.front().mean_bpshz;
    bool increasing = sliced.n_cu == 20 && sliced.points.front().m_d2d == 0;
    for (std::size_t p = 1; p < sliced.points.size(); ++p)
      if (!(sliced.points[p].mean_bpshz > sliced.points[p - 1].mean_bpshz)) increasing = false;
    std::ostringstream d;
    d.precision(4);
    d << std::fixed << "20 CUs m=0 " << narrow_none << " vs 10 CUs m=" << baseline.points.back().m_d2d
      << ' ' << wide_full << "; 20-CU means " << sliced.points.front().mean_bpshz << " .. "
      << sliced.points.back().mean_bpshz << (increasing ? " increasing" : " NOT increasing");
    ScenarioConfig twenty = rc.scenario;
    twenty.n_cu *= 2;
    audited.push_back(std::move(baseline));
    audited_cfg.push_back(rc.scenario);
    audited.push_back(std::move(sliced));
    audited_cfg.push_back(twenty);
    return Outcome{narrow_none < wide_full && increasing, d.str()};
  });

  report(7, "constraint_audit", [&] {
    std::size_t trials = 0, violations = 0, matched = 0;
    std::string first;
    for (std::size_t s = 0; s < audited.size(); ++s) {
      trials += audited[s].trials.size();
      for (const TrialRecord& t : audited[s].trials) matched += t.served;
      violations += audit_sweep(audited_cfg[s], audited[s], first);
    }
    std::ostringstream d;
    d << audited.size() << " sweeps, " << trials << " trials, " << matched << " matched pairs, "
      << violations << " violating trials" << (first.empty() ? "" : ": ") << first;
    return Outcome{audited.size() == 3 && trials > 0 && violations == 0, d.str()};
  });

  report(8, "byte_identical_csv", [] {
    const fs::path root = fs::temp_directory_path() / ("d2dsim_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string cfg = (fs::path(D2DSIM_SOURCE_DIR) / "configs" / "table1.cfg").string();
    std::string reference;
    std::ostringstream d;
    bool ok = true;
    int k = 0;
    for (const char* env : {"D2DSIM_THREADS=1", "D2DSIM_THREADS=1", "D2DSIM_THREADS=4", ""}) {
      const fs::path out = root / std::to_string(k++);
      if (run_cli("run " + cfg + " --out " + out.string(), env) != 0) {
        ok = false;
        d << "run " << k << " failed; ";
        continue;
      }
      const std::string csv = slurp(out / "sweep.csv") + '\x1f' + slurp(out / "trials.csv");
      if (reference.empty()) reference = csv;
      if (csv != reference) {
        ok = false;
        d << "run " << k << " (" << (*env ? env : "default threads") << ") differs; ";
      }
    }
    fs::remove_all(root);
    d << "4 CLI runs (threads 1, 1, 4, default), " << reference.size() << " bytes each";
    return Outcome{ok && !reference.empty(), d.str()};
  });

  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
