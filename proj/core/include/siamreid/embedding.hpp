#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "siamreid/image.hpp"

namespace siamreid {

/// Immutable appearance embedding. Components are always finite.
class FeatureVector {
 public:
  FeatureVector() = default;
  /// Throws kInvalidArgument if any component is non-finite.
  explicit FeatureVector(std::vector<double> values);

  std::size_t dimension() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double norm() const noexcept;
  FeatureVector normalized() const;  // throws kZeroVector

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

/// 1 - cos(f, g), in [0, 2].
/// Throws kDimensionMismatch or kZeroVector.
double cosine_distance(const FeatureVector& f, const FeatureVector& g);

struct DictionaryConfig {
  std::size_t capacity = 32;
  long frame_gap = 10;
  bool normalize_before_mean = false;
  friend bool operator==(const DictionaryConfig&, const DictionaryConfig&) = default;
};

/// Gallery of accepted target features. Entry 0 is the first-frame template
/// feature and is never evicted; on overflow the oldest later entry goes.
class TargetDictionary {
 public:
  explicit TargetDictionary(DictionaryConfig config = {});

  /// Inserts iff nothing was saved yet or frame_index - last_saved >= gap.
  bool maybe_insert(const FeatureVector& feature, long frame_index);

  /// Componentwise mean of the entries (optionally of their unit versions).
  FeatureVector representative() const;

  const std::vector<FeatureVector>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::optional<long> last_saved_frame() const noexcept { return last_saved_; }
  const DictionaryConfig& config() const noexcept { return config_; }

  friend bool operator==(const TargetDictionary&, const TargetDictionary&) = default;

 private:
  DictionaryConfig config_;
  std::vector<FeatureVector> entries_;
  std::optional<long> last_saved_;
};

/// Simulator stand-in for an image crop: a latent identity vector as
/// observed this frame. `key` identifies the observation for seeded noise.
struct LatentObservation {
  FeatureVector latent;
  std::uint64_t key = 0;
  friend bool operator==(const LatentObservation&, const LatentObservation&) = default;
};

struct PixelPatch {
  RasterImage image;
  friend bool operator==(const PixelPatch&, const PixelPatch&) = default;
};

using AppearanceObservation = std::variant<PixelPatch, LatentObservation>;

/// Contract standing in for the re-identification network.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::string name() const = 0;
  /// 0 when the dimension is taken from the observations.
  virtual std::size_t dimension() const noexcept = 0;
  virtual FeatureVector embed(const AppearanceObservation& observation) const = 0;
};

/// Passes simulator latents through, with optional seeded Gaussian noise
/// followed by re-normalization.
class IdentityEmbedder final : public Embedder {
 public:
  explicit IdentityEmbedder(double noise_sigma = 0.0, std::uint64_t seed = 0);

  std::string name() const override { return "identity"; }
  std::size_t dimension() const noexcept override { return 0; }
  FeatureVector embed(const AppearanceObservation& observation) const override;

 private:
  double noise_sigma_;
  std::uint64_t seed_;
};

/// Features arrive pre-computed with the candidates; embed() always throws
/// kMissingFeature.
class ExternalEmbedder final : public Embedder {
 public:
  explicit ExternalEmbedder(std::size_t dimension = 0) : dimension_(dimension) {}

  std::string name() const override { return "external"; }
  std::size_t dimension() const noexcept override { return dimension_; }
  FeatureVector embed(const AppearanceObservation& observation) const override;

 private:
  std::size_t dimension_;
};

}  // namespace siamreid
