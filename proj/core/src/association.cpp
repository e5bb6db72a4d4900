#include "siamreid/association.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "siamreid/errors.hpp"

namespace siamreid {

void AssociationConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "association.epsilon must be > 0");
  }
  for (const double t : {accept_threshold_tracking, accept_threshold_lost}) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::kInvalidArgument, "acceptance thresholds must be finite and >= 0");
    }
  }
}

std::vector<Candidate> filter_by_score(std::span<const Candidate> candidates, double tau) {
  std::vector<Candidate> kept;
  kept.reserve(candidates.size());
  std::copy_if(candidates.begin(), candidates.end(), std::back_inserter(kept),
               [tau](const Candidate& c) { return c.score >= tau; });
  return kept;
}

std::vector<double> appearance_distances(std::span<const Candidate> candidates,
                                         const FeatureVector& representative) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].feature) {
      throw Error(ErrorCode::kMissingFeature,
                  "candidate " + std::to_string(i) + " has no appearance feature");
    }
    out.push_back(cosine_distance(*candidates[i].feature, representative));
  }
  return out;
}

std::vector<double> positional_distances(std::span<const Candidate> candidates,
                                         Point prev_center) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(distance(prev_center, c.box.center()));
  return out;
}

FusedDistances fuse(std::span<const double> appearance, std::span<const double> positional,
                    double epsilon) {
  if (appearance.size() != positional.size() || appearance.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fuse needs equal, non-empty distance sets");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
  const auto [lo, hi] = std::minmax_element(positional.begin(), positional.end());
  const double min_e = *lo;
  const double denom = *hi - min_e + epsilon;

  FusedDistances out;
  out.bias.resize(appearance.size());
  out.fused.resize(appearance.size());
  for (std::size_t i = 0; i < appearance.size(); ++i) {
    out.bias[i] = (positional[i] - min_e) / denom;
    out.fused[i] = appearance[i] + out.bias[i];
  }
  return out;
}

std::size_t argmin(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "argmin of an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

AssociationResult select(std::span<const Candidate> candidates,
                         const FeatureVector& representative,
                         std::optional<Point> prev_center, const AssociationConfig& config) {
  AssociationResult result;
  if (candidates.empty()) return result;

  DistanceBreakdown breakdown;
  if (config.use_appearance) {
    breakdown.appearance = appearance_distances(candidates, representative);
  } else {
    breakdown.appearance.reserve(candidates.size());
    for (const auto& c : candidates) breakdown.appearance.push_back(1.0 - c.score);
  }

  if (config.use_positional_bias && prev_center) {
    auto raw = positional_distances(candidates, *prev_center);
    auto fused = fuse(breakdown.appearance, raw, config.epsilon);
    breakdown.positional_raw = std::move(raw);
    breakdown.positional_bias = std::move(fused.bias);
    breakdown.fused = std::move(fused.fused);
  } else {
    breakdown.fused = breakdown.appearance;
  }

  const std::size_t best = argmin(breakdown.fused);
  const double threshold =
      prev_center ? config.accept_threshold_tracking : config.accept_threshold_lost;
  result.selected = best;
  result.accepted = breakdown.fused[best] <= threshold;
  result.breakdown = std::move(breakdown);
  return result;
}

}  // namespace siamreid
