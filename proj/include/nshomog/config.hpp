#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nshomog/harness.hpp"

namespace nshomog {

/// Everything a CLI run needs, parsed from one JSON file. Every key is
/// optional; see README for the defaults and an annotated example.
struct RunConfig {
  HarnessConfig harness;
  /// Coefficient mode of single-path and ensemble runs: the oscillating
  /// medium at `eps`, or the effective constants when unset.
  std::optional<EpsilonScale> eps;
  int members = 100;
  std::vector<EpsilonScale> eps_list;
  bool coupled = true;

  /// The single-path configuration for the config seed.
  SimulationConfig simulation() const;
  void validate() const;
};

/// Defaults for every key.
RunConfig default_run_config();

/// Throws ConfigError naming the offending key on malformed or inconsistent
/// input, ResolutionError when the grid cannot hold the cutoff.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace nshomog
