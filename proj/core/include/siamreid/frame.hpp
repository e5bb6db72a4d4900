#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "siamreid/embedding.hpp"
#include "siamreid/geometry.hpp"
#include "siamreid/image.hpp"

namespace siamreid {

/// One simulated object as seen in one frame. `latent` is the noisy
/// observed appearance; visibility 0 means occluded.
struct SimObservation {
  int id = 0;
  BoundingBox box;
  double visibility = 1.0;
  FeatureVector latent;

  friend bool operator==(const SimObservation&, const SimObservation&) = default;
};

struct SimPayload {
  std::vector<SimObservation> objects;

  friend bool operator==(const SimPayload&, const SimPayload&) = default;
};

/// Frame without pixels, for runs where candidates and features come from an
/// interchange file.
struct EmptyPayload {
  friend bool operator==(const EmptyPayload&, const EmptyPayload&) = default;
};

using FramePayload = std::variant<RasterImage, SimPayload, EmptyPayload>;

struct Frame {
  long index = 0;
  FrameDims dims;
  FramePayload payload = EmptyPayload{};

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Random-access sequence of frames.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual Frame frame(std::size_t i) const = 0;
};

class VectorFrameSource final : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
  std::size_t size() const override { return frames_.size(); }
  Frame frame(std::size_t i) const override { return frames_.at(i); }

 private:
  std::vector<Frame> frames_;
};

/// Sorted *.ppm files of a directory, loaded on demand.
class PpmDirectorySource final : public FrameSource {
 public:
  explicit PpmDirectorySource(const std::filesystem::path& dir);
  std::size_t size() const override { return paths_.size(); }
  Frame frame(std::size_t i) const override;

 private:
  std::vector<std::filesystem::path> paths_;
};

/// `count` pixel-less frames of fixed dimensions.
class EmptyFrameSource final : public FrameSource {
 public:
  EmptyFrameSource(FrameDims dims, std::size_t count) : dims_(dims), count_(count) {}
  std::size_t size() const override { return count_; }
  Frame frame(std::size_t i) const override {
    return {static_cast<long>(i), dims_, EmptyPayload{}};
  }

 private:
  FrameDims dims_;
  std::size_t count_;
};

}  // namespace siamreid
