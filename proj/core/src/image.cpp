#include "siamreid/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "siamreid/errors.hpp"

namespace siamreid {

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image size");
  }
  rgb_.assign(static_cast<std::size_t>(width) * height * 3, fill);
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (width < 0 || height < 0 ||
      rgb_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "raster size does not match buffer");
  }
}

RasterImage RasterImage::crop(const BoundingBox& box) const {
  const int x0 = std::clamp(static_cast<int>(std::lround(box.x_min())), 0, width_);
  const int y0 = std::clamp(static_cast<int>(std::lround(box.y_min())), 0, height_);
  const int x1 = std::clamp(static_cast<int>(std::lround(box.x_max())), 0, width_);
  const int y1 = std::clamp(static_cast<int>(std::lround(box.y_max())), 0, height_);
  if (x1 <= x0 || y1 <= y0) {
    throw Error(ErrorCode::kNoOverlap, "crop lies outside the image");
  }
  RasterImage out(x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y) {
    const auto* src = &rgb_[(static_cast<std::size_t>(y) * width_ + x0) * 3];
    std::copy(src, src + static_cast<std::size_t>(x1 - x0) * 3,
              out.rgb_.begin() + static_cast<std::size_t>(y - y0) * out.width_ * 3);
  }
  return out;
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

}  // namespace

RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  if (next_token(in) != "P6") {
    throw Error(ErrorCode::kIoError, path.string() + ": not a binary PPM (P6)");
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token(in));
    height = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kIoError, path.string() + ": bad PPM header");
  }
  if (width <= 0 || height <= 0 || maxval != 255) {
    throw Error(ErrorCode::kIoError, path.string() + ": unsupported PPM header");
  }
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(rgb.size())) {
    throw Error(ErrorCode::kIoError, path.string() + ": truncated PPM data");
  }
  return RasterImage(width, height, std::move(rgb));
}

void write_ppm(const std::filesystem::path& path, const RasterImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace siamreid
