#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "siamreid/geometry.hpp"

namespace siamreid {

/// Interleaved 8-bit RGB raster, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = 0);
  RasterImage(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  FrameDims dims() const noexcept { return {width_, height_}; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  std::uint8_t at(int x, int y, int channel) const noexcept {
    return rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    auto* p = &rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3];
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  /// (r + g + b) / 3
  double gray(int x, int y) const noexcept {
    const auto* p = &rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3];
    return (static_cast<double>(p[0]) + p[1] + p[2]) / 3.0;
  }

  /// Integer-pixel crop: corners rounded to the nearest pixel, clamped to the
  /// image. Throws kNoOverlap if nothing remains.
  RasterImage crop(const BoundingBox& box) const;

  const std::vector<std::uint8_t>& data() const noexcept { return rgb_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> rgb_;
};

/// Binary PPM (P6, maxval 255). Throws kIoError / kMalformedRecord.
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RasterImage& image);

}  // namespace siamreid
