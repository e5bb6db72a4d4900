#include "commands.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "pipeline.hpp"
#include "run_config.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/evaluation.hpp"

namespace siamreid::app {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInfeasibleConfig:
      return kExitConfig;
    case ErrorCode::kInitFailed:
      return kExitInit;
    case ErrorCode::kIoError:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kStepFailed:
      return kExitIo;
    default:
      return kExitFailure;
  }
}

template <typename Body>
int guarded(std::ostream& err, const char* command, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "siamreid " << command << ": " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "siamreid " << command << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

RunConfig load_config(const fs::path& path, const CommonOptions& options) {
  RunConfig config = path.empty() ? RunConfig{} : load_run_config(path);
  if (options.seed) {
    config.seed = *options.seed;
    validate(config);
  }
  return config;
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string box_track_text(const BoxTrack& boxes, const std::vector<std::string>& header) {
  std::ostringstream out;
  write_box_track(out, boxes, header);
  return out.str();
}

fs::path sibling(const fs::path& csv, const std::string& suffix) {
  return csv.parent_path() / (csv.stem().string() + suffix);
}

void write_curves(const fs::path& output_csv, const std::string& infix,
                  const EvaluationSummary& summary) {
  std::ostringstream success;
  write_curve_csv(success, summary.success.thresholds, summary.success.values);
  write_file(sibling(output_csv, infix + ".success.csv"), success.str());
  std::ostringstream precision;
  write_curve_csv(precision, summary.precision.thresholds, summary.precision.values);
  write_file(sibling(output_csv, infix + ".precision.csv"), precision.str());
}

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    }));
  }
  for (auto& j : jobs) j.get();  // rethrows the first failure
}

}  // namespace

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t matches{};
  std::vector<fs::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &matches) == 0) {
    for (std::size_t i = 0; i < matches.gl_pathc; ++i) out.emplace_back(matches.gl_pathv[i]);
  }
  ::globfree(&matches);
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_track(const fs::path& config_path, const fs::path& sequence_dir,
              const fs::path& output_path, const CommonOptions& options, std::ostream& err) {
  return guarded(err, "track", [&] {
    const RunConfig config = load_config(config_path, options);
    const Sequence sequence = load_sequence(sequence_dir);
    const auto outputs = track(config, sequence);
    write_file(output_path,
               box_track_text(reported_boxes(outputs), provenance(config, sequence.name)));
    if (!options.quiet) {
      const auto lost = std::count_if(outputs.begin(), outputs.end(),
                                      [](const FrameOutput& o) { return !o.box; });
      err << "tracked " << outputs.size() << " frames (" << lost << " without a box) -> "
          << output_path.string() << '\n';
    }
    return int{kExitOk};
  });
}

int cmd_simulate(const fs::path& config_path, const fs::path& output_dir,
                 const CommonOptions& options, std::ostream& err) {
  return guarded(err, "simulate", [&] {
    const RunConfig config = load_config(config_path, options);
    const Scenario scenario = generate(config.scenario_config());
    const auto header = provenance(config, output_dir.filename().string());

    std::ostringstream doc;
    export_scenario(doc, scenario);
    write_file(output_dir / "scenario.json", doc.str());
    write_file(output_dir / "groundtruth.txt",
               box_track_text(target_ground_truth(scenario), header));
    write_file(output_dir / "init.txt",
               box_track_text({scenario.target().trajectory.front()}, header));
    if (!options.quiet) {
      err << "simulated " << scenario.config.num_frames << " frames with "
          << scenario.objects.size() << " objects -> " << output_dir.string() << '\n';
    }
    return int{kExitOk};
  });
}

int cmd_evaluate(const std::string& results_glob, const fs::path& gt_dir,
                 const fs::path& output_csv, const CommonOptions& options, std::ostream& err) {
  return guarded(err, "evaluate", [&] {
    const auto files = expand_glob(results_glob);
    if (files.empty()) {
      throw Error(ErrorCode::kIoError, "no results files match '" + results_glob + "'");
    }
    std::vector<SequenceResult> results;
    for (const auto& file : files) {
      SequenceResult r;
      r.name = file.stem().string();
      fs::path gt = gt_dir / (r.name + ".txt");
      if (!fs::exists(gt)) gt = gt_dir / r.name / "groundtruth.txt";
      if (!fs::exists(gt)) {
        throw Error(ErrorCode::kIoError,
                    "no ground truth for sequence '" + r.name + "' (results " + file.string() + ")");
      }
      r.predictions = load_box_track(file);
      r.ground_truth = load_box_track(gt);
      if (r.predictions.size() != r.ground_truth.size()) {
        throw Error(ErrorCode::kIoError,
                    r.name + ": " + std::to_string(r.predictions.size()) +
                        " result lines vs " + std::to_string(r.ground_truth.size()) +
                        " ground-truth lines");
      }
      results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(),
              [](const SequenceResult& a, const SequenceResult& b) { return a.name < b.name; });

    std::vector<EvaluationSummary> summaries(results.size());
    parallel_for(results.size(), [&](std::size_t i) { summaries[i] = evaluate(results[i]); });

    std::vector<SummaryRow> rows;
    for (std::size_t i = 0; i < results.size(); ++i) {
      rows.push_back({results[i].name, summaries[i]});
      write_curves(output_csv, "." + results[i].name, summaries[i]);
    }
    const EvaluationSummary all = aggregate_summaries(summaries);
    rows.push_back({"ALL", all});
    write_curves(output_csv, "", all);

    std::ostringstream csv;
    write_summary_csv(csv, rows);
    write_file(output_csv, csv.str());
    if (!options.quiet) {
      err << "evaluated " << results.size() << " sequences: auc " << format_number(all.success.auc)
          << ", precision@20 " << format_number(all.precision.precision_at_20) << '\n';
    }
    return int{kExitOk};
  });
}

int cmd_sweep(const fs::path& config_path, const std::string& param_spec,
              const fs::path& output_csv, const SweepOptions& sweep,
              const CommonOptions& options, std::ostream& err) {
  return guarded(err, "sweep", [&] {
    const RunConfig base = load_config(config_path, options);
    if (sweep.runs < 1) throw Error(ErrorCode::kConfigError, "--runs must be >= 1");

    // parse "key=v1,v2;key2=w1,w2"
    std::vector<std::pair<std::string, std::vector<std::string>>> params;
    std::istringstream spec(param_spec);
    std::string part;
    while (std::getline(spec, part, ';')) {
      if (part.find_first_not_of(" \t") == std::string::npos) continue;
      const auto eq = part.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kConfigError, "parameter spec '" + part + "' lacks '='");
      }
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
      };
      const std::string key = trim(part.substr(0, eq));
      if (!is_config_key(key)) {
        throw Error(ErrorCode::kConfigError, "unknown sweep parameter '" + key + "'");
      }
      std::vector<std::string> values;
      std::istringstream list(part.substr(eq + 1));
      std::string v;
      while (std::getline(list, v, ',')) values.push_back(trim(v));
      if (values.empty()) throw Error(ErrorCode::kConfigError, key + ": no values to sweep");
      params.emplace_back(key, std::move(values));
    }
    if (params.empty() || params.size() > 2) {
      throw Error(ErrorCode::kConfigError, "sweep needs one or two parameters");
    }

    // expand the grid; configs are validated up front so bad values exit 2
    struct Combination {
      std::vector<std::string> labels;
      RunConfig config;
    };
    std::vector<Combination> grid;
    const std::size_t second = params.size() == 2 ? params[1].second.size() : 1;
    for (const auto& a : params[0].second) {
      for (std::size_t j = 0; j < second; ++j) {
        Combination c{{}, base};
        set_config_value(c.config, params[0].first, a);
        c.labels.push_back(get_config_value(c.config, params[0].first));
        if (params.size() == 2) {
          set_config_value(c.config, params[1].first, params[1].second[j]);
          c.labels.push_back(get_config_value(c.config, params[1].first));
        }
        grid.push_back(std::move(c));
      }
    }

    std::optional<Sequence> fixed;
    if (sweep.sequence_dir) {
      fixed = load_sequence(*sweep.sequence_dir);
      if (!fixed->ground_truth) {
        throw Error(ErrorCode::kIoError,
                    "sweep sequence has no groundtruth.txt: " + sweep.sequence_dir->string());
      }
    }

    std::vector<EvaluationSummary> summaries(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      std::vector<EvaluationSummary> per_run;
      if (fixed) {
        const auto outputs = track(grid[i].config, *fixed);
        per_run.push_back(
            evaluate({fixed->name, reported_boxes(outputs), *fixed->ground_truth}));
      } else {
        for (int r = 0; r < sweep.runs; ++r) {
          RunConfig cfg = grid[i].config;
          cfg.seed = grid[i].config.seed + static_cast<std::uint64_t>(r);
          const Sequence seq =
              sequence_from_scenario(generate(cfg.scenario_config()), "sim");
          const auto outputs = track(cfg, seq);
          per_run.push_back(evaluate({seq.name, reported_boxes(outputs), *seq.ground_truth}));
        }
      }
      summaries[i] = aggregate_summaries(per_run);
    });

    std::ostringstream csv;
    for (const auto& h : provenance(base, fixed ? fixed->name : "simulated")) {
      csv << "# " << h << '\n';
    }
    for (const auto& [key, values] : params) csv << key << ',';
    csv << "auc,precision20,accuracy,robustness\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (const auto& label : grid[i].labels) {
        // quote labels that carry commas (lists, occlusion windows)
        if (label.find(',') != std::string::npos) {
          csv << '"' << label << "\",";
        } else {
          csv << label << ',';
        }
      }
      const auto& s = summaries[i];
      csv << format_number(s.success.auc) << ',' << format_number(s.precision.precision_at_20)
          << ',' << format_number(s.ar.accuracy) << ',' << format_number(s.ar.robustness) << '\n';
    }
    write_file(output_csv, csv.str());
    if (!options.quiet) {
      err << "swept " << grid.size() << " combinations -> " << output_csv.string() << '\n';
    }
    return int{kExitOk};
  });
}

}  // namespace siamreid::app
