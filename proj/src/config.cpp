#include "d2dsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "d2dsim/units.hpp"

namespace d2dsim {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(key, "expected a number, got '" + text + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

// "0,1,2" or "0..10" (inclusive), or a mix: "0..3,5".
std::vector<std::size_t> parse_counts(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty entry in list '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_unsigned(key, item));
      continue;
    }
    const auto lo = parse_unsigned(key, trim(item.substr(0, dots)));
    const auto hi = parse_unsigned(key, trim(item.substr(dots + 2)));
    if (lo > hi) throw ConfigError(key, "range '" + item + "' is decreasing");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename Member>
Setter number(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    std::invoke(member, c) = parse_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"label", [](RunConfig& c, const std::string&, const std::string& v) { c.label = v; }},
      {"output_dir",
       [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"slicing_comparison",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.slicing_comparison = parse_bool(k, v);
       }},
      {"dump_topology",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dump_topology = parse_bool(k, v);
       }},
      {"n_cu",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.n_cu = parse_unsigned(k, v);
       }},
      {"d2d_counts",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.d2d_counts = parse_counts(k, v);
       }},
      {"n_drops",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.n_drops = parse_unsigned(k, v);
       }},
      {"base_seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.base_seed = parse_unsigned(k, v);
       }},
      {"allow_unprofitable_reuse",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.allow_unprofitable_reuse = parse_bool(k, v);
       }},
      {"allow_full_reuse",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.allow_full_reuse = parse_bool(k, v);
       }},
      {"fast_fading",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.pathloss.fast_fading_enabled = parse_bool(k, v);
       }},
      {"total_bandwidth_hz", number([](RunConfig& c) -> double& { return c.scenario.total_bandwidth_hz; })},
      {"cell_radius_m", number([](RunConfig& c) -> double& { return c.scenario.layout.radius_m; })},
      {"carrier_frequency_hz", number([](RunConfig& c) -> double& { return c.scenario.layout.carrier_frequency_hz; })},
      {"bs_antenna_height_m", number([](RunConfig& c) -> double& { return c.scenario.layout.bs_antenna_height_m; })},
      {"ue_antenna_height_m", number([](RunConfig& c) -> double& { return c.scenario.layout.ue_antenna_height_m; })},
      {"bs_antenna_gain_db", number([](RunConfig& c) -> double& { return c.scenario.layout.bs_antenna_gain_db; })},
      {"ue_antenna_gain_db", number([](RunConfig& c) -> double& { return c.scenario.layout.ue_antenna_gain_db; })},
      {"bs_noise_figure_db", number([](RunConfig& c) -> double& { return c.scenario.layout.bs_noise_figure_db; })},
      {"ue_noise_figure_db", number([](RunConfig& c) -> double& { return c.scenario.layout.ue_noise_figure_db; })},
      {"cellular_pl_intercept_db", number([](RunConfig& c) -> double& { return c.scenario.pathloss.cellular_pl_intercept_db; })},
      {"cellular_pl_coeff", number([](RunConfig& c) -> double& { return c.scenario.pathloss.cellular_pl_exponent_coeff; })},
      {"d2d_pl_intercept_db", number([](RunConfig& c) -> double& { return c.scenario.pathloss.d2d_pl_intercept_db; })},
      {"d2d_pl_coeff", number([](RunConfig& c) -> double& { return c.scenario.pathloss.d2d_pl_exponent_coeff; })},
      {"cellular_shadowing_std_db", number([](RunConfig& c) -> double& { return c.scenario.pathloss.cellular_shadowing_std_db; })},
      {"d2d_shadowing_std_db", number([](RunConfig& c) -> double& { return c.scenario.pathloss.d2d_shadowing_std_db; })},
      {"d2d_pair_min_m", number([](RunConfig& c) -> double& { return c.scenario.d2d_pair.min_m; })},
      {"d2d_pair_max_m", number([](RunConfig& c) -> double& { return c.scenario.d2d_pair.max_m; })},
      {"latency_s", number([](RunConfig& c) -> double& { return c.scenario.traffic.latency_s; })},
      {"packet_size_bytes", number([](RunConfig& c) -> double& { return c.scenario.traffic.packet_size_bytes; })},
      {"bucket_size_packets", number([](RunConfig& c) -> double& { return c.scenario.traffic.bucket_size_packets; })},
      {"token_rate_packets_per_s", number([](RunConfig& c) -> double& { return c.scenario.traffic.token_rate_packets_per_s; })},
      {"p_max_cu_dbm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.limits.p_max_cu_mw = dbm_to_mw(parse_double(k, v));
       }},
      {"p_max_d2d_dbm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.limits.p_max_d2d_mw = dbm_to_mw(parse_double(k, v));
       }},
      {"noise_dbm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.scenario.limits.noise_mw = dbm_to_mw(parse_double(k, v));
       }},
  };
  return table;
}

void check(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void validate(const RunConfig& c) {
  const ScenarioConfig& s = c.scenario;
  check(s.n_cu >= 1, "n_cu", "must be >= 1");
  check(s.n_drops >= 1, "n_drops", "must be >= 1");
  check(!s.d2d_counts.empty(), "d2d_counts", "must list at least one D2D count");
  for (std::size_t m : s.d2d_counts) {
    std::ostringstream msg;
    msg << "count " << m << " with n_cu " << s.n_cu;
    check(m <= s.n_cu, "d2d_counts",
          msg.str() + " violates the reuse-partner assumption M < N (each D2D needs its own CU)");
    check(m < s.n_cu || s.allow_full_reuse, "d2d_counts",
          msg.str() + " is full reuse (M = N); the assumption M < N only allows it with "
                      "allow_full_reuse = true");
  }
  check(s.total_bandwidth_hz > 0.0, "total_bandwidth_hz", "must be > 0");
  check(s.layout.radius_m > 0.0, "cell_radius_m", "must be > 0");
  check(s.layout.carrier_frequency_hz > 0.0, "carrier_frequency_hz", "must be > 0");
  check(s.layout.bs_antenna_height_m > 0.0, "bs_antenna_height_m", "must be > 0");
  check(s.layout.ue_antenna_height_m > 0.0, "ue_antenna_height_m", "must be > 0");
  check(s.pathloss.cellular_pl_exponent_coeff > 0.0, "cellular_pl_coeff", "must be > 0");
  check(s.pathloss.d2d_pl_exponent_coeff > 0.0, "d2d_pl_coeff", "must be > 0");
  check(s.pathloss.cellular_shadowing_std_db >= 0.0, "cellular_shadowing_std_db", "must be >= 0");
  check(s.pathloss.d2d_shadowing_std_db >= 0.0, "d2d_shadowing_std_db", "must be >= 0");
  check(s.d2d_pair.min_m > 0.0, "d2d_pair_min_m", "must be > 0");
  check(s.d2d_pair.max_m >= s.d2d_pair.min_m, "d2d_pair_max_m", "must be >= d2d_pair_min_m");
  check(s.d2d_pair.max_m < s.layout.radius_m, "d2d_pair_max_m", "must be < cell_radius_m");
  check(s.traffic.latency_s > 0.0, "latency_s", "must be > 0");
  check(s.traffic.packet_size_bytes >= 0.0, "packet_size_bytes", "must be >= 0");
  check(s.traffic.bucket_size_packets >= 0.0, "bucket_size_packets", "must be >= 0");
  check(s.traffic.token_rate_packets_per_s >= 0.0, "token_rate_packets_per_s", "must be >= 0");
  check(s.limits.p_max_cu_mw > 0.0, "p_max_cu_dbm", "must be a finite power");
  check(s.limits.p_max_d2d_mw > 0.0, "p_max_d2d_dbm", "must be a finite power");
  check(s.limits.noise_mw > 0.0, "noise_dbm", "must be a finite power");
  check(!c.label.empty(), "label", "must not be empty");
  check(c.label.find_first_of(",\"\n") == std::string::npos, "label",
        "must not contain commas, quotes or newlines");
  check(!c.output_dir.empty(), "output_dir", "must not be empty");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  cfg.scenario.limits = {dbm_to_mw(23.0), dbm_to_mw(23.0), dbm_to_mw(-114.0)};
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(trim(body), "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
    if (!seen.insert(key).second)
      throw ConfigError(key, "duplicate key (line " + std::to_string(line_no) + ")");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace d2dsim
