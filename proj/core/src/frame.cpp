#include "siamreid/frame.hpp"

#include <algorithm>

#include "siamreid/errors.hpp"

namespace siamreid {

PpmDirectorySource::PpmDirectorySource(const std::filesystem::path& dir) {
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      paths_.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(paths_.begin(), paths_.end());
}

Frame PpmDirectorySource::frame(std::size_t i) const {
  RasterImage image = read_ppm(paths_.at(i));
  const FrameDims dims = image.dims();
  return {static_cast<long>(i), dims, std::move(image)};
}

}  // namespace siamreid
