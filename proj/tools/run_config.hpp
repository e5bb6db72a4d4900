#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "siamreid/providers.hpp"
#include "siamreid/simulator.hpp"
#include "siamreid/tracker.hpp"

namespace siamreid::app {

/// Everything a run needs. Loaded from a flat `key = value` file with dotted
/// section prefixes, e.g. `association.epsilon = 1e-6`.
struct RunConfig {
  std::uint64_t seed = 0;
  TrackerConfig tracker;

  std::string provider = "oracle";  // oracle | external | ncc
  double oracle_base_score = 0.9;
  std::string candidates_path = "candidates.jsonl";
  NccConfig ncc;

  std::string embedder = "identity";  // identity | histogram | external
  double embedder_noise_sigma = 0.0;

  ScenarioConfig simulator;

  /// Scenario config with the run seed applied.
  ScenarioConfig scenario_config() const;
};

/// Throws Error(kConfigError) naming the key for unknown keys, duplicate
/// keys, malformed values or values violating a field invariant.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// Sets one field from its textual value, then re-validates.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);
bool is_config_key(std::string_view key);
std::vector<std::string> config_keys();

/// Canonical text form: every key, fixed order, one per line.
std::string serialize(const RunConfig& config);

/// Hex FNV-1a of the canonical form.
std::string config_hash(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace siamreid::app
