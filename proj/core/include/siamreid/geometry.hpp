#pragma once

#include <array>
#include <span>
#include <vector>

namespace siamreid {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct FrameDims {
  int width = 1;
  int height = 1;

  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

/// Axis-aligned box in continuous pixel coordinates, stored center + size.
/// Corner form (x_min, y_min, w, h) is only a view over this.
class BoundingBox {
 public:
  BoundingBox() = default;

  /// Throws kInvalidArgument unless w > 0, h > 0 and all fields finite.
  static BoundingBox from_center(double cx, double cy, double w, double h);
  static BoundingBox from_corner(double x_min, double y_min, double w, double h);

  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  double width() const noexcept { return w_; }
  double height() const noexcept { return h_; }
  Point center() const noexcept { return {cx_, cy_}; }

  double x_min() const noexcept { return cx_ - 0.5 * w_; }
  double y_min() const noexcept { return cy_ - 0.5 * h_; }
  double x_max() const noexcept { return cx_ + 0.5 * w_; }
  double y_max() const noexcept { return cy_ + 0.5 * h_; }
  double area() const noexcept { return w_ * h_; }

  /// (x_min, y_min, w, h)
  std::array<double, 4> corner() const noexcept {
    return {x_min(), y_min(), w_, h_};
  }

  BoundingBox translated(double dx, double dy) const noexcept {
    BoundingBox b = *this;
    b.cx_ += dx;
    b.cy_ += dy;
    return b;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  BoundingBox(double cx, double cy, double w, double h)
      : cx_(cx), cy_(cy), w_(w), h_(h) {}

  double cx_ = 0.0;
  double cy_ = 0.0;
  double w_ = 1.0;
  double h_ = 1.0;
};

struct Anchor {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;
};

/// Region-proposal regression offsets: dx, dy relative to anchor size,
/// dw, dh as log-scale factors.
struct RegressionDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;
};

struct SearchRegion {
  BoundingBox box;
  double scale_factor = 1.0;

  friend bool operator==(const SearchRegion&, const SearchRegion&) = default;
};

/// Parameters of a square anchor grid as produced by a region-proposal head.
/// Anchor index order is ratio-major, then row, then column.
struct AnchorGridSpec {
  int size = 25;
  double stride = 8.0;
  double base_size = 64.0;
  std::vector<double> ratios = {1.0 / 3.0, 0.5, 1.0, 2.0, 3.0};
  Point origin;  // image-space center of the grid

  std::size_t anchor_count() const noexcept {
    return static_cast<std::size_t>(size) * static_cast<std::size_t>(size) *
           ratios.size();
  }
};

double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

double center_distance(const BoundingBox& a, const BoundingBox& b) noexcept;
double distance(Point a, Point b) noexcept;

bool intersects(const BoundingBox& a, const BoundingBox& b) noexcept;

/// cx' = cx + dx*w, cy' = cy + dy*h, w' = w*exp(dw), h' = h*exp(dh).
/// Throws kDecodeError on non-finite or non-positive results.
BoundingBox decode_anchor(const Anchor& anchor, const RegressionDelta& delta);

std::vector<Anchor> generate_anchor_grid(const AnchorGridSpec& spec);

/// Clamps the corner form to [0,width] x [0,height]. Throws kNoOverlap when
/// nothing of the box is left inside the frame.
BoundingBox clip_to_frame(const BoundingBox& box, FrameDims frame);

/// Side of the square nominal search patch: 2*sqrt((w+p)(h+p)), p = (w+h)/2.
double nominal_search_side(double w, double h) noexcept;

/// Scale at which a region centered anywhere in the frame covers all of it.
double saturation_scale(const BoundingBox& last_box, FrameDims frame) noexcept;

/// Square region of side nominal_search_side * scale centered on last_box,
/// clipped to the frame. Throws kInvalidArgument if scale < 1.
SearchRegion expand_region(const BoundingBox& last_box, double scale,
                           FrameDims frame);

}  // namespace siamreid
