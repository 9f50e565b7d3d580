// d2dsim: D2D reuse allocation sweeps and oracle validation.
//
//   d2dsim run <config> [--out DIR]
//   d2dsim validate [--instances K] [--seed S]
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime/constraint failure,
// 3 validation property failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "d2dsim/config.hpp"
#include "d2dsim/csv.hpp"
#include "d2dsim/experiment.hpp"
#include "d2dsim/matching.hpp"
#include "d2dsim/validation.hpp"

namespace fs = std::filesystem;
using namespace d2dsim;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitValidation = 3;

std::size_t worker_threads() {
  const char* env = std::getenv("D2DSIM_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError("D2DSIM_THREADS", std::string("not an integer: ") + env);
  return static_cast<std::size_t>(v);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

void print_summary(const std::vector<SweepResult>& sweeps) {
  std::printf("%-10s %5s %5s %12s %10s %8s\n", "scenario", "n_cu", "m", "mean_bps/Hz", "std",
              "served");
  for (const SweepResult& s : sweeps)
    for (const SweepPoint& p : s.points)
      std::printf("%-10s %5zu %5zu %12.4f %10.4f %8.2f\n", s.scenario.c_str(), s.n_cu, p.m_d2d,
                  p.mean_bpshz, p.std_bpshz, p.mean_served);
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg;
  std::size_t threads = 0;
  try {
    cfg = load_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    threads = worker_threads();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<SweepResult> sweeps;
  try {
    if (cfg.slicing_comparison) {
      auto [baseline, sliced] = run_slicing_comparison(cfg.scenario, threads);
      sweeps.push_back(std::move(baseline));
      sweeps.push_back(std::move(sliced));
    } else {
      sweeps.push_back(run_sweep(cfg.scenario, kBaselineScenario, "baseline", threads));
    }
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    std::ofstream diag(cfg.output_dir / "diagnostics.log", std::ios::app);
    diag << "run " << config_path << " failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  for (SweepResult& s : sweeps) s.label = cfg.label;

  std::ostringstream sweep_csv, trials_csv, topology_csv;
  write_sweep_csv(sweep_csv, sweeps);
  write_trials_csv(trials_csv, sweeps);

  try {
    fs::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "sweep.csv", sweep_csv.str());
    write_file(cfg.output_dir / "trials.csv", trials_csv.str());
    if (cfg.dump_topology) {
      const ScenarioConfig& sc = cfg.scenario;
      std::size_t m_max = 0;
      for (std::size_t m : sc.d2d_counts) m_max = std::max(m_max, m);
      const Topology topo = drop_topology(sc, m_max, drop_seed(sc.base_seed, kBaselineScenario, 0));
      write_topology_csv(topology_csv, sc.layout, topo);
      write_file(cfg.output_dir / "topology.csv", topology_csv.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitConfig;
  }

  print_summary(sweeps);
  std::cout << "wrote " << (cfg.output_dir / "sweep.csv").string() << " and "
            << (cfg.output_dir / "trials.csv").string() << '\n';
  return 0;
}

int cmd_validate(const ValidationOptions& options) {
  if (options.instances == 0) {
    std::cerr << "warning: --instances 0 checks nothing; passing vacuously\n";
  }
  const ValidationReport report = run_validation(options);
  for (const PropertyResult& p : report.properties) {
    if (p.passed()) {
      std::printf("PASS %-28s %zu checks\n", p.name.c_str(), p.checked);
    } else {
      std::printf("FAIL %-28s %zu/%zu failed; first at seed %llu: %s\n", p.name.c_str(),
                  p.failures, p.checked,
                  static_cast<unsigned long long>(*p.first_failing_seed), p.first_failure.c_str());
    }
  }
  if (report.passed()) return 0;
  for (const PropertyResult& p : report.properties) {
    if (!p.passed()) {
      std::printf("reproduce with: d2dsim validate --instances 1 --seed %llu\n",
                  static_cast<unsigned long long>(*p.first_failing_seed));
      break;
    }
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2D spectrum-reuse allocation simulator"};
  app.set_version_flag("--version", std::string("d2dsim ") + D2DSIM_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run the sweeps described by a config file");
  run->add_option("config", config_path, "Path to the run configuration")->required();
  run->add_option("--out", out_dir, "Override output_dir from the config");

  ValidationOptions vopts;
  auto* validate = app.add_subcommand("validate", "Check the solvers against brute-force oracles");
  validate->add_option("--instances", vopts.instances, "Number of random instances")
      ->capture_default_str();
  validate->add_option("--seed", vopts.seed, "Seed of the first instance")->capture_default_str();
  validate->add_option("--max-cu", vopts.max_cu, "Largest CU count per instance")
      ->capture_default_str();
  validate->add_option("--max-d2d", vopts.max_d2d, "Largest D2D count per instance (<= 8)")
      ->capture_default_str();
  validate->add_flag("--inject-delta-sign-flip", vopts.inject_delta_sign_flip,
                     "Test hook: corrupt the increments fed to the Hungarian solver");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out_dir);
  if (vopts.max_d2d > kBruteForceMaxD2d) {
    std::cerr << "--max-d2d must be <= " << kBruteForceMaxD2d << '\n';
    return kExitConfig;
  }
  return cmd_validate(vopts);
}
