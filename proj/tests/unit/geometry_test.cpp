#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "generators.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/geometry.hpp"

using namespace siamreid;
using siamreid::testing::Gen;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

bool contains(const BoundingBox& outer, const BoundingBox& inner) {
  return outer.x_min() <= inner.x_min() + 1e-9 && outer.y_min() <= inner.y_min() + 1e-9 &&
         outer.x_max() >= inner.x_max() - 1e-9 && outer.y_max() >= inner.y_max() - 1e-9;
}

}  // namespace

TEST(BoundingBox, CornerAndCenterFormsAgree) {
  const auto a = BoundingBox::from_corner(10, 20, 30, 40);
  const auto b = BoundingBox::from_center(25, 40, 30, 40);
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a.x_max(), 40);
  EXPECT_DOUBLE_EQ(a.y_max(), 60);
}

TEST(BoundingBox, RejectsNonPositiveOrNonFiniteSizes) {
  EXPECT_EQ(code_of([] { BoundingBox::from_corner(0, 0, 0, 5); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { BoundingBox::from_center(0, 0, 5, -1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { BoundingBox::from_center(NAN, 0, 5, 5); }), ErrorCode::kInvalidArgument);
}

TEST(Iou, IdenticalBoxesGiveOne) {
  const auto b = BoundingBox::from_corner(3, 4, 10, 7);
  EXPECT_DOUBLE_EQ(iou(b, b), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
  EXPECT_EQ(iou(BoundingBox::from_corner(0, 0, 2, 2), BoundingBox::from_corner(5, 5, 2, 2)), 0.0);
  // touching edges share no area
  EXPECT_EQ(iou(BoundingBox::from_corner(0, 0, 2, 2), BoundingBox::from_corner(2, 0, 2, 2)), 0.0);
}

TEST(Iou, HalfOverlapIsOneThird) {
  // intersection 2, union 6
  EXPECT_NEAR(iou(BoundingBox::from_corner(0, 0, 2, 2), BoundingBox::from_corner(1, 0, 2, 2)),
              1.0 / 3.0, 1e-12);
}

TEST(CenterDistance, Examples) {
  const auto a = BoundingBox::from_center(0, 0, 4, 4);
  EXPECT_EQ(center_distance(a, BoundingBox::from_center(0, 0, 9, 2)), 0.0);
  EXPECT_DOUBLE_EQ(center_distance(a, BoundingBox::from_center(3, 4, 1, 1)), 5.0);
}

TEST(CenterDistance, TranslationInvariant) {
  Gen gen(11);
  for (int k = 0; k < 200; ++k) {
    const auto a = gen.box();
    const auto b = gen.box();
    const double tx = gen.uniform(-100, 100);
    const double ty = gen.uniform(-100, 100);
    EXPECT_NEAR(center_distance(a, b), center_distance(a.translated(tx, ty), b.translated(tx, ty)),
                1e-9);
  }
}

TEST(DecodeAnchor, ZeroDeltaIsIdentity) {
  const Anchor a{10, 20, 8, 16};
  const auto b = decode_anchor(a, {});
  EXPECT_EQ(b, BoundingBox::from_center(10, 20, 8, 16));
}

TEST(DecodeAnchor, LogTwoDoublesWidth) {
  const auto b = decode_anchor({10, 10, 4, 4}, {0, 0, std::log(2.0), 0});
  EXPECT_NEAR(b.width(), 8.0, 1e-12);
  EXPECT_NEAR(b.height(), 4.0, 1e-12);
}

TEST(DecodeAnchor, ShiftIsScaledByAnchorWidth) {
  const auto b = decode_anchor({10, 10, 4, 4}, {0.5, 0, 0, 0});
  EXPECT_NEAR(b.cx(), 12.0, 1e-12);
  EXPECT_NEAR(b.cy(), 10.0, 1e-12);
}

TEST(DecodeAnchor, OverflowIsDecodeError) {
  EXPECT_EQ(code_of([] { decode_anchor({0, 0, 4, 4}, {0, 0, 1e6, 0}); }), ErrorCode::kDecodeError);
  EXPECT_EQ(code_of([] { decode_anchor({0, 0, 4, 4}, {NAN, 0, 0, 0}); }), ErrorCode::kDecodeError);
}

TEST(AnchorGrid, DefaultLayout) {
  AnchorGridSpec spec;
  spec.origin = {100, 100};
  const auto anchors = generate_anchor_grid(spec);
  ASSERT_EQ(anchors.size(), 25u * 25u * 5u);
  // ratio-major, then rows, then columns; centre of the grid lands on origin
  const std::size_t per_ratio = 25 * 25;
  const auto& mid = anchors[2 * per_ratio + 12 * 25 + 12];
  EXPECT_NEAR(mid.cx, 100, 1e-12);
  EXPECT_NEAR(mid.cy, 100, 1e-12);
  EXPECT_NEAR(mid.w, 64, 1e-12);
  EXPECT_NEAR(anchors[1].cx - anchors[0].cx, 8, 1e-12);
  EXPECT_NEAR(anchors[25].cy - anchors[0].cy, 8, 1e-12);
  // every anchor of one ratio keeps the base area
  for (const auto& a : anchors) EXPECT_NEAR(a.w * a.h, 64 * 64, 1e-9);
}

TEST(ClipToFrame, InteriorUnchanged) {
  const auto b = BoundingBox::from_corner(10, 10, 20, 20);
  EXPECT_EQ(clip_to_frame(b, {100, 100}), b);
}

TEST(ClipToFrame, ProtrudingLeftIsClamped) {
  const auto c = clip_to_frame(BoundingBox::from_corner(-5, 10, 20, 10), {100, 100});
  EXPECT_DOUBLE_EQ(c.x_min(), 0);
  EXPECT_DOUBLE_EQ(c.width(), 15);
  EXPECT_DOUBLE_EQ(c.y_min(), 10);
  EXPECT_DOUBLE_EQ(c.height(), 10);
}

TEST(ClipToFrame, FullyOutsideIsNoOverlap) {
  EXPECT_EQ(code_of([] { clip_to_frame(BoundingBox::from_corner(200, 200, 5, 5), {100, 100}); }),
            ErrorCode::kNoOverlap);
}

TEST(ExpandRegion, ScaleOneIsNominal) {
  const auto last = BoundingBox::from_center(100, 100, 20, 20);
  const auto r = expand_region(last, 1.0, {1000, 1000});
  EXPECT_DOUBLE_EQ(r.box.width(), nominal_search_side(20, 20));
  EXPECT_DOUBLE_EQ(r.scale_factor, 1.0);
}

TEST(ExpandRegion, ScaleTwoOnSquareTwentyIs160) {
  const auto r = expand_region(BoundingBox::from_center(100, 100, 20, 20), 2.0, {1000, 1000});
  EXPECT_DOUBLE_EQ(r.box.width(), 160);
  EXPECT_DOUBLE_EQ(r.box.height(), 160);
  EXPECT_DOUBLE_EQ(r.box.cx(), 100);
  EXPECT_DOUBLE_EQ(r.box.cy(), 100);
}

TEST(ExpandRegion, SaturationCoversFrame) {
  const FrameDims frame{200, 150};
  const auto last = BoundingBox::from_center(30, 120, 20, 20);
  const auto r = expand_region(last, saturation_scale(last, frame), frame);
  EXPECT_DOUBLE_EQ(r.box.x_min(), 0);
  EXPECT_DOUBLE_EQ(r.box.y_min(), 0);
  EXPECT_DOUBLE_EQ(r.box.x_max(), 200);
  EXPECT_DOUBLE_EQ(r.box.y_max(), 150);
}

TEST(ExpandRegion, ScaleBelowOneRejected) {
  EXPECT_EQ(code_of([] { expand_region(BoundingBox::from_center(5, 5, 2, 2), 0.5, {10, 10}); }),
            ErrorCode::kInvalidArgument);
}

TEST(GeometryProperties, IouSymmetricAndBounded) {
  Gen gen(1);
  for (int k = 0; k < 2000; ++k) {
    const auto a = gen.box();
    const auto b = gen.box();
    const double ab = iou(a, b);
    EXPECT_NEAR(ab, iou(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(iou(a, a), 1.0, 1e-12);
  }
}

TEST(GeometryProperties, CenterDistanceTriangleInequality) {
  Gen gen(2);
  for (int k = 0; k < 2000; ++k) {
    const auto a = gen.box();
    const auto b = gen.box();
    const auto c = gen.box();
    EXPECT_LE(center_distance(a, c), center_distance(a, b) + center_distance(b, c) + 1e-9);
  }
}

TEST(GeometryProperties, ZeroDeltaDecodeIsIdentity) {
  Gen gen(3);
  for (int k = 0; k < 500; ++k) {
    const Anchor a{gen.uniform(-50, 300), gen.uniform(-50, 300), gen.uniform(1, 100),
                   gen.uniform(1, 100)};
    const auto b = decode_anchor(a, {});
    EXPECT_NEAR(b.cx(), a.cx, 1e-12);
    EXPECT_NEAR(b.cy(), a.cy, 1e-12);
    EXPECT_NEAR(b.width(), a.w, 1e-12);
    EXPECT_NEAR(b.height(), a.h, 1e-12);
  }
}

TEST(GeometryProperties, ExpandRegionMonotoneInScale) {
  Gen gen(4);
  const FrameDims frame{320, 240};
  for (int k = 0; k < 500; ++k) {
    const auto last = BoundingBox::from_center(gen.uniform(5, 315), gen.uniform(5, 235),
                                               gen.uniform(4, 60), gen.uniform(4, 60));
    const double s1 = gen.uniform(1, 6);
    const double s2 = s1 + gen.uniform(0, 6);
    EXPECT_TRUE(contains(expand_region(last, s2, frame).box, expand_region(last, s1, frame).box));
  }
}
