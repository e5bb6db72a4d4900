#include "siamreid/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "siamreid/errors.hpp"
#include "siamreid/random.hpp"

namespace siamreid {

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (!std::all_of(values_.begin(), values_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "feature vector has non-finite component");
  }
}

double FeatureVector::norm() const noexcept {
  double s = 0.0;
  for (const double v : values_) s += v * v;
  return std::sqrt(s);
}

FeatureVector FeatureVector::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw Error(ErrorCode::kZeroVector, "cannot normalize a zero vector");
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [n](double v) { return v / n; });
  return FeatureVector(std::move(out));
}

double cosine_distance(const FeatureVector& f, const FeatureVector& g) {
  if (f.dimension() != g.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine distance between dimensions " + std::to_string(f.dimension()) +
                    " and " + std::to_string(g.dimension()));
  }
  const double nf = f.norm();
  const double ng = g.norm();
  if (!(nf > 0.0) || !(ng > 0.0)) {
    throw Error(ErrorCode::kZeroVector, "cosine distance of a zero vector");
  }
  const auto a = f.values();
  const auto b = g.values();
  const double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  const double cosine = std::clamp(dot / (nf * ng), -1.0, 1.0);
  return 1.0 - cosine;
}

TargetDictionary::TargetDictionary(DictionaryConfig config) : config_(config) {
  if (config_.capacity < 1 || config_.frame_gap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dictionary capacity and frame gap must be >= 1");
  }
}

bool TargetDictionary::maybe_insert(const FeatureVector& feature, long frame_index) {
  if (!entries_.empty() && feature.dimension() != entries_.front().dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "dictionary entry dimension mismatch");
  }
  if (last_saved_ && frame_index - *last_saved_ < config_.frame_gap) return false;
  if (entries_.size() >= config_.capacity) {
    if (config_.capacity == 1) return false;  // only the pinned entry fits
    entries_.erase(entries_.begin() + 1);
  }
  entries_.push_back(feature);
  last_saved_ = frame_index;
  return true;
}

FeatureVector TargetDictionary::representative() const {
  if (entries_.empty()) throw Error(ErrorCode::kEmptyDictionary, "dictionary is empty");
  std::vector<double> mean(entries_.front().dimension(), 0.0);
  for (const auto& entry : entries_) {
    const FeatureVector& v = config_.normalize_before_mean ? entry.normalized() : entry;
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  const double n = static_cast<double>(entries_.size());
  for (double& m : mean) m /= n;
  return FeatureVector(std::move(mean));
}

IdentityEmbedder::IdentityEmbedder(double noise_sigma, std::uint64_t seed)
    : noise_sigma_(noise_sigma), seed_(seed) {
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "identity embedder noise must be >= 0");
  }
}

FeatureVector IdentityEmbedder::embed(const AppearanceObservation& observation) const {
  const auto* latent = std::get_if<LatentObservation>(&observation);
  if (latent == nullptr) {
    throw Error(ErrorCode::kWrongPayload, "identity embedder needs a latent observation");
  }
  if (noise_sigma_ == 0.0) return latent->latent;
  Rng rng(derive_seed(seed_, {latent->key}));
  std::normal_distribution<double> noise(0.0, noise_sigma_);
  std::vector<double> out(latent->latent.values().begin(), latent->latent.values().end());
  for (double& v : out) v += noise(rng);
  return FeatureVector(std::move(out)).normalized();
}

FeatureVector ExternalEmbedder::embed(const AppearanceObservation&) const {
  throw Error(ErrorCode::kMissingFeature,
              "external embedder: candidate carries no pre-computed feature");
}

}  // namespace siamreid
