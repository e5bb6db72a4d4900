#include "siamreid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "siamreid/errors.hpp"

namespace siamreid {

namespace {

bool all_finite(double a, double b, double c, double d) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
         std::isfinite(d);
}

}  // namespace

BoundingBox BoundingBox::from_center(double cx, double cy, double w, double h) {
  if (!all_finite(cx, cy, w, h) || w <= 0.0 || h <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid box: center (" + std::to_string(cx) + ", " +
                    std::to_string(cy) + ") size " + std::to_string(w) + "x" +
                    std::to_string(h));
  }
  return BoundingBox(cx, cy, w, h);
}

BoundingBox BoundingBox::from_corner(double x_min, double y_min, double w,
                                     double h) {
  return from_center(x_min + 0.5 * w, y_min + 0.5 * h, w, h);
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double ih =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double distance(Point a, Point b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) noexcept {
  return distance(a.center(), b.center());
}

bool intersects(const BoundingBox& a, const BoundingBox& b) noexcept {
  return std::min(a.x_max(), b.x_max()) > std::max(a.x_min(), b.x_min()) &&
         std::min(a.y_max(), b.y_max()) > std::max(a.y_min(), b.y_min());
}

BoundingBox decode_anchor(const Anchor& anchor, const RegressionDelta& delta) {
  if (!all_finite(delta.dx, delta.dy, delta.dw, delta.dh)) {
    throw Error(ErrorCode::kDecodeError, "non-finite regression delta");
  }
  const double cx = anchor.cx + delta.dx * anchor.w;
  const double cy = anchor.cy + delta.dy * anchor.h;
  const double w = anchor.w * std::exp(delta.dw);
  const double h = anchor.h * std::exp(delta.dh);
  if (!all_finite(cx, cy, w, h) || w <= 0.0 || h <= 0.0) {
    throw Error(ErrorCode::kDecodeError, "decoded box is not finite");
  }
  return BoundingBox::from_center(cx, cy, w, h);
}

std::vector<Anchor> generate_anchor_grid(const AnchorGridSpec& spec) {
  if (spec.size < 1 || spec.stride <= 0.0 || spec.base_size <= 0.0 ||
      spec.ratios.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid anchor grid");
  }
  std::vector<Anchor> anchors;
  anchors.reserve(spec.anchor_count());
  const double half = 0.5 * static_cast<double>(spec.size - 1);
  for (const double ratio : spec.ratios) {
    if (!(ratio > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "anchor ratio must be > 0");
    }
    // ratio is h / w at constant area base_size^2
    const double w = spec.base_size / std::sqrt(ratio);
    const double h = spec.base_size * std::sqrt(ratio);
    for (int row = 0; row < spec.size; ++row) {
      for (int col = 0; col < spec.size; ++col) {
        anchors.push_back({spec.origin.x + (col - half) * spec.stride,
                           spec.origin.y + (row - half) * spec.stride, w, h});
      }
    }
  }
  return anchors;
}

BoundingBox clip_to_frame(const BoundingBox& box, FrameDims frame) {
  const double x0 = std::max(box.x_min(), 0.0);
  const double y0 = std::max(box.y_min(), 0.0);
  const double x1 = std::min(box.x_max(), static_cast<double>(frame.width));
  const double y1 = std::min(box.y_max(), static_cast<double>(frame.height));
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) {
    throw Error(ErrorCode::kNoOverlap, "box lies outside the frame");
  }
  if (x0 == box.x_min() && y0 == box.y_min() && x1 == box.x_max() &&
      y1 == box.y_max()) {
    return box;
  }
  return BoundingBox::from_corner(x0, y0, x1 - x0, y1 - y0);
}

double nominal_search_side(double w, double h) noexcept {
  const double p = 0.5 * (w + h);
  return 2.0 * std::sqrt((w + p) * (h + p));
}

double saturation_scale(const BoundingBox& last_box, FrameDims frame) noexcept {
  const double half_needed =
      std::max({last_box.cx(), frame.width - last_box.cx(), last_box.cy(),
                frame.height - last_box.cy()});
  const double side = nominal_search_side(last_box.width(), last_box.height());
  return std::max(1.0, 2.0 * half_needed / side);
}

SearchRegion expand_region(const BoundingBox& last_box, double scale,
                           FrameDims frame) {
  if (!(scale >= 1.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "search scale must be >= 1");
  }
  const double side =
      nominal_search_side(last_box.width(), last_box.height()) * scale;
  const auto raw = BoundingBox::from_center(last_box.cx(), last_box.cy(), side, side);
  return {clip_to_frame(raw, frame), scale};
}

}  // namespace siamreid
