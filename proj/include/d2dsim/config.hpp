#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "d2dsim/experiment.hpp"

namespace d2dsim {

/// Flat `key = value` run description. `#` starts a comment. Powers and
/// noise are given in dBm and converted to mW here.
struct RunConfig {
  ScenarioConfig scenario;
  std::string label = "run";
  std::filesystem::path output_dir = "out";
  bool slicing_comparison = false;
  bool dump_topology = false;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace d2dsim
