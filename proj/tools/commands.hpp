#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace siamreid::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitInit = 4,
};

struct CommonOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  bool quiet = false;
};

int cmd_track(const std::filesystem::path& config_path, const std::filesystem::path& sequence_dir,
              const std::filesystem::path& output_path, const CommonOptions& options,
              std::ostream& err);

/// Writes scenario.json, groundtruth.txt and init.txt into output_dir.
int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
                 const CommonOptions& options, std::ostream& err);

/// Pairs every results file matching the glob with <gt_dir>/<name>.txt or
/// <gt_dir>/<name>/groundtruth.txt, where <name> is the results file stem.
/// Writes the summary CSV plus <stem>.success.csv / <stem>.precision.csv
/// curve files (aggregate and per sequence) next to it.
int cmd_evaluate(const std::string& results_glob, const std::filesystem::path& gt_dir,
                 const std::filesystem::path& output_csv, const CommonOptions& options,
                 std::ostream& err);

struct SweepOptions {
  std::optional<std::filesystem::path> sequence_dir;  // default: simulate
  int runs = 1;                                       // seeds per combination
};

/// param_spec: "key=v1,v2" or "key=v1,v2;key2=w1,w2".
int cmd_sweep(const std::filesystem::path& config_path, const std::string& param_spec,
              const std::filesystem::path& output_csv, const SweepOptions& sweep,
              const CommonOptions& options, std::ostream& err);

std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace siamreid::app
