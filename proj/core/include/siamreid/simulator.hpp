#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "siamreid/embedding.hpp"
#include "siamreid/frame.hpp"
#include "siamreid/geometry.hpp"

namespace siamreid {

struct MotionConfig {
  double speed = 2.0;                        // pixels per frame
  double direction_change_probability = 0.05;

  friend bool operator==(const MotionConfig&, const MotionConfig&) = default;
};

/// Half-open frame interval [start, end) during which the target is hidden.
struct OcclusionWindow {
  long start = 0;
  long end = 0;

  bool contains(long frame) const noexcept { return frame >= start && frame < end; }
  friend bool operator==(const OcclusionWindow&, const OcclusionWindow&) = default;
};

struct ScenarioConfig {
  FrameDims frame{200, 200};
  long num_frames = 300;
  int num_confusers = 4;
  /// Target cosine similarity between each confuser latent and the target.
  double confuser_similarity = 0.7;
  std::vector<OcclusionWindow> occlusion_windows;
  /// Per-component std of the Gaussian added to latents before re-normalizing.
  double appearance_noise_sigma = 0.05;
  MotionConfig motion;
  double box_jitter_sigma = 0.5;
  double object_width = 20.0;
  double object_height = 20.0;
  int latent_dim = 64;
  std::uint64_t seed = 0;

  /// Throws kInfeasibleConfig on any out-of-range field.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct SimObject {
  int id = 0;  // the target is 0
  FeatureVector latent;  // unit norm
  std::vector<BoundingBox> trajectory;
  std::vector<bool> visible;

  friend bool operator==(const SimObject&, const SimObject&) = default;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<SimObject> objects;
  std::vector<Frame> frames;

  const SimObject& target() const { return objects.front(); }
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct GroundTruthEntry {
  int id = 0;
  BoundingBox box;
  bool visible = true;
};

/// Pure function of the config (seed included).
Scenario generate(const ScenarioConfig& config);

/// Throws kIndexOutOfRange.
std::vector<GroundTruthEntry> ground_truth(const Scenario& scenario, long frame_index);

/// Rebuilds the per-frame observations from config, latents and trajectories.
/// Appearance noise is a function of (seed, frame, object id) only.
std::vector<Frame> render_frames(const ScenarioConfig& config,
                                 const std::vector<SimObject>& objects);

/// JSON document: {"config": {...}, "objects": [{"id", "latent",
/// "trajectory": [[x_min, y_min, w, h], ...], "visible": [...]}]}.
void export_scenario(std::ostream& out, const Scenario& scenario);
Scenario import_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace siamreid
