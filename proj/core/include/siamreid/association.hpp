#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "siamreid/embedding.hpp"
#include "siamreid/geometry.hpp"

namespace siamreid {

/// A scored box from a candidate provider. `feature` is attached either by
/// the provider (pre-computed) or by the tracker after embedding. `latent`
/// is set only by the simulator oracle and feeds the identity embedder.
struct Candidate {
  BoundingBox box;
  double score = 0.0;
  std::optional<FeatureVector> feature;
  std::optional<LatentObservation> latent;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Per-candidate distances of one association. The positional arrays are
/// present only when the positional bias was applied.
struct DistanceBreakdown {
  std::vector<double> appearance;
  std::optional<std::vector<double>> positional_raw;
  std::optional<std::vector<double>> positional_bias;
  std::vector<double> fused;

  std::size_t size() const noexcept { return fused.size(); }
  bool bias_applied() const noexcept { return positional_bias.has_value(); }

  friend bool operator==(const DistanceBreakdown&, const DistanceBreakdown&) = default;
};

struct AssociationResult {
  std::optional<std::size_t> selected;
  std::optional<DistanceBreakdown> breakdown;
  bool accepted = false;
};

struct AssociationConfig {
  double epsilon = 1e-6;
  // Tuned on the 4-confuser, similarity-0.7 simulator family; a confuser
  // sits near cosine distance 0.3 from the representative.
  double accept_threshold_tracking = 0.25;
  double accept_threshold_lost = 0.2;
  bool use_positional_bias = true;
  /// Ablation switch. When false the appearance term is replaced by
  /// 1 - score, so selection uses only position and detector score.
  bool use_appearance = true;

  /// Throws kInvalidArgument unless epsilon > 0 and thresholds in (0, 2].
  void validate() const;
};

/// Keeps candidates with score >= tau, in order.
std::vector<Candidate> filter_by_score(std::span<const Candidate> candidates, double tau);

/// D_a: cosine distance of every candidate feature to the representative.
/// Throws kMissingFeature if a candidate has no feature.
std::vector<double> appearance_distances(std::span<const Candidate> candidates,
                                         const FeatureVector& representative);

/// D_e: Euclidean distance of every candidate center to prev_center.
std::vector<double> positional_distances(std::span<const Candidate> candidates,
                                         Point prev_center);

struct FusedDistances {
  std::vector<double> bias;
  std::vector<double> fused;
};

/// bias_i = (d_e_i - min D_e) / (max D_e - min D_e + epsilon);
/// fused_i = d_a_i + bias_i.
FusedDistances fuse(std::span<const double> appearance, std::span<const double> positional,
                    double epsilon);

/// Index of the smallest value; ties go to the lowest index.
std::size_t argmin(std::span<const double> values);

/// Full association for one frame. prev_center absent means the target is
/// lost: no positional term and the lost-mode acceptance threshold.
AssociationResult select(std::span<const Candidate> candidates,
                         const FeatureVector& representative,
                         std::optional<Point> prev_center, const AssociationConfig& config);

}  // namespace siamreid
