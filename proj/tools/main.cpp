#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "siamreid/version.hpp"

int main(int argc, char** argv) {
  using namespace siamreid::app;

  CLI::App app{"siamreid: re-identifying single-object tracker"};
  app.set_version_flag("--version", std::string(siamreid::kVersion));
  app.require_subcommand(1);

  std::string config_path;  // empty: built-in defaults
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string out;

  auto common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) cmd->add_option("--config", config_path, "config file (key = value)");
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_flag("--quiet", quiet, "suppress progress output");
    cmd->add_option("--out", out, "output path")->required();
  };

  std::string sequence_dir;
  auto* track = app.add_subcommand("track", "track the target through one sequence");
  track->add_option("sequence", sequence_dir, "sequence directory")->required();
  common(track, true);

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario");
  common(simulate, true);

  std::string results_glob, gt_dir;
  auto* evaluate = app.add_subcommand("evaluate", "score results against ground truth");
  evaluate->add_option("results", results_glob, "glob of result files")->required();
  evaluate->add_option("groundtruth", gt_dir, "ground-truth directory")->required();
  common(evaluate, false);

  std::string params;
  SweepOptions sweep_opts;
  std::string sweep_sequence;
  auto* sweep = app.add_subcommand("sweep", "evaluate a grid of config values");
  sweep->add_option("params", params, "\"key=v1,v2[;key2=w1,w2]\"")->required();
  sweep->add_option("--sequence", sweep_sequence, "sequence directory (default: simulate)");
  sweep->add_option("--runs", sweep_opts.runs, "simulated seeds per combination");
  common(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const CommonOptions options{seed, quiet};
  if (*track) return cmd_track(config_path, sequence_dir, out, options, std::cerr);
  if (*simulate) return cmd_simulate(config_path, out, options, std::cerr);
  if (*evaluate) return cmd_evaluate(results_glob, gt_dir, out, options, std::cerr);
  if (!sweep_sequence.empty()) sweep_opts.sequence_dir = sweep_sequence;
  return cmd_sweep(config_path, params, out, sweep_opts, options, std::cerr);
}
