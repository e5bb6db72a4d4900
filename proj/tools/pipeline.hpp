#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "siamreid/evaluation.hpp"
#include "siamreid/frame.hpp"
#include "siamreid/simulator.hpp"
#include "siamreid/tracker.hpp"

namespace siamreid::app {

/// Input of one tracking run. A sequence directory holds `init.txt` plus one
/// of: `scenario.json`, PPM frames (in `img/` or the directory itself), or
/// `sequence.json` ({"width", "height", "num_frames"}) for pixel-less runs
/// fed entirely by a candidate file. `groundtruth.txt` is optional.
struct Sequence {
  std::string name;
  std::filesystem::path dir;  // empty for in-memory scenarios
  std::shared_ptr<const FrameSource> frames;
  BoundingBox initial_box;
  std::optional<Scenario> scenario;
  std::optional<BoxTrack> ground_truth;
};

/// Throws Error(kIoError) naming the missing path.
Sequence load_sequence(const std::filesystem::path& dir);

Sequence sequence_from_scenario(Scenario scenario, std::string name);

/// Target boxes per frame; absent while the target is occluded.
BoxTrack target_ground_truth(const Scenario& scenario);

/// Builds provider, embedder and tracker from the config and runs one pass.
std::vector<FrameOutput> track(const RunConfig& config, const Sequence& sequence);

BoxTrack reported_boxes(const std::vector<FrameOutput>& outputs);

/// Provenance comment lines for result files.
std::vector<std::string> provenance(const RunConfig& config, const std::string& sequence);

}  // namespace siamreid::app
