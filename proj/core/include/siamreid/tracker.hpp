#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "siamreid/association.hpp"
#include "siamreid/embedding.hpp"
#include "siamreid/frame.hpp"
#include "siamreid/geometry.hpp"
#include "siamreid/providers.hpp"

namespace siamreid {

enum class PhaseKind { kTracking, kLost };

struct TrackerPhase {
  PhaseKind kind = PhaseKind::kTracking;
  long lost_duration = 0;  // >= 1 while lost, 0 while tracking

  static TrackerPhase tracking() noexcept { return {PhaseKind::kTracking, 0}; }
  static TrackerPhase lost(long duration) noexcept { return {PhaseKind::kLost, duration}; }
  bool is_lost() const noexcept { return kind == PhaseKind::kLost; }

  friend bool operator==(const TrackerPhase&, const TrackerPhase&) = default;
};

struct TrackerConfig {
  double score_threshold = 0.6;
  AssociationConfig association;
  double growth_factor = 1.3;
  /// Upper bound on the search scale; unset means "until the region covers
  /// the whole frame".
  std::optional<double> max_scale;
  DictionaryConfig dictionary;
  /// Report the last confirmed box while lost instead of nothing.
  bool hold_last_box = false;

  void validate() const;
};

struct TrackerState {
  TrackerPhase phase;
  BoundingBox last_box;
  TargetDictionary dictionary;
  long frame_index = 0;
  double search_scale = 1.0;

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

struct FrameOutput {
  long frame_index = 0;
  /// Present iff the association was accepted (or hold_last_box while lost).
  std::optional<BoundingBox> box;
  /// Phase after this frame.
  TrackerPhase phase;
  /// Phase the association ran under (the phase before this frame).
  PhaseKind association_mode = PhaseKind::kTracking;
  std::optional<DistanceBreakdown> breakdown;
  std::optional<std::size_t> selected;
  bool accepted = false;
  SearchRegion region;
  /// Search scale after this frame.
  double search_scale = 1.0;
  std::size_t proposed = 0;  // before score filtering

  friend bool operator==(const FrameOutput&, const FrameOutput&) = default;
};

/// Confuser-aware single-object tracker: provider -> score filter -> embed
/// -> associate -> update, with a Tracking/Lost state machine. While lost
/// the search region grows geometrically and matching is appearance-only.
class Tracker {
 public:
  Tracker(TrackerConfig config, std::shared_ptr<CandidateProvider> provider,
          std::shared_ptr<const Embedder> embedder);

  /// Seeds the dictionary with the first-frame target feature.
  /// Throws kInitFailed.
  TrackerState init(const Frame& frame, const BoundingBox& initial_box);

  /// Throws StepFailed; `state` is never modified.
  std::pair<TrackerState, FrameOutput> step(const TrackerState& state, const Frame& frame) const;

  const TrackerConfig& config() const noexcept { return config_; }

 private:
  FeatureVector embed_candidate(const Candidate& candidate, const Frame& frame) const;

  TrackerConfig config_;
  std::shared_ptr<CandidateProvider> provider_;
  std::shared_ptr<const Embedder> embedder_;
};

/// One-pass run: init on frame 0, step on every later frame, never
/// re-initialize. Output has one entry per frame.
std::vector<FrameOutput> run_sequence(const FrameSource& frames, const BoundingBox& initial_box,
                                      Tracker& tracker);

}  // namespace siamreid
