#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "siamreid/association.hpp"
#include "siamreid/errors.hpp"

using namespace siamreid;
using siamreid::testing::Gen;

namespace {

FeatureVector fv(std::initializer_list<double> v) { return FeatureVector(std::vector<double>(v)); }

Candidate cand(double cx, double cy, double score, std::optional<FeatureVector> f = {}) {
  return {BoundingBox::from_center(cx, cy, 10, 10), score, std::move(f), {}};
}

struct OracleSelection {
  std::size_t index;
  double fused;
};

// Appearance plus min-max normalized displacement, then argmin, from scratch;
// ties go to the lowest index.
OracleSelection oracle_select(const std::vector<Candidate>& cands, const FeatureVector& rep,
                              std::optional<Point> prev, double eps) {
  const std::size_t n = cands.size();
  std::vector<double> app(n), pos(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = *cands[i].feature;
    double dot = 0, nf = 0, nr = 0;
    for (std::size_t k = 0; k < f.dimension(); ++k) {
      dot += f[k] * rep[k];
      nf += f[k] * f[k];
      nr += rep[k] * rep[k];
    }
    app[i] = 1.0 - dot / std::sqrt(nf * nr);
    if (prev) pos[i] = std::hypot(cands[i].box.cx() - prev->x, cands[i].box.cy() - prev->y);
  }
  const double lo = *std::min_element(pos.begin(), pos.end());
  const double hi = *std::max_element(pos.begin(), pos.end());
  OracleSelection best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    const double fused = app[i] + (prev ? (pos[i] - lo) / (hi - lo + eps) : 0.0);
    if (fused < best.fused) best = {i, fused};
  }
  return best;
}

}  // namespace

TEST(FilterByScore, Examples) {
  const std::vector<Candidate> c{cand(0, 0, 0.9), cand(1, 1, 0.1)};
  const auto kept = filter_by_score(c, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], c[0]);
  EXPECT_EQ(filter_by_score(c, 0.0).size(), 2u);
  const std::vector<Candidate> boundary{cand(0, 0, 0.5)};
  EXPECT_EQ(filter_by_score(boundary, 0.5).size(), 1u);
}

TEST(FilterByScore, OutputIsSubsequence) {
  Gen gen(31);
  for (int k = 0; k < 300; ++k) {
    std::vector<Candidate> c;
    const auto n = static_cast<std::size_t>(gen.integer(0, 12));
    for (std::size_t i = 0; i < n; ++i) c.push_back(cand(gen.uniform(0, 100), 0, gen.uniform(0, 1)));
    const double tau = gen.uniform(0, 1);
    const auto kept = filter_by_score(c, tau);
    std::size_t j = 0;
    for (const auto& k2 : kept) {
      EXPECT_GE(k2.score, tau);
      while (j < c.size() && !(c[j] == k2)) ++j;
      ASSERT_LT(j, c.size()) << "kept candidate out of order or not in input";
      ++j;
    }
  }
}

TEST(AppearanceDistances, Examples) {
  const auto rep = fv({1, 0});
  const std::vector<Candidate> same{cand(0, 0, 1, rep)};
  EXPECT_NEAR(appearance_distances(same, rep)[0], 0.0, 1e-15);
  const std::vector<Candidate> two{cand(0, 0, 1, fv({0, 1})), cand(0, 0, 1, fv({2, 0}))};
  const auto d = appearance_distances(two, rep);
  EXPECT_NEAR(d[0], 1.0, 1e-15);
  EXPECT_NEAR(d[1], 0.0, 1e-15);
}

TEST(AppearanceDistances, MissingFeatureThrows) {
  const std::vector<Candidate> c{cand(0, 0, 1)};
  try {
    appearance_distances(c, fv({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFeature);
  }
}

TEST(AppearanceDistances, RandomInstanceMatchesScalarLoop) {
  Gen gen(32);
  const auto rep = gen.feature(8);
  std::vector<Candidate> c;
  for (int i = 0; i < 5; ++i) c.push_back(cand(0, 0, 1, gen.feature(8)));
  const auto d = appearance_distances(c, rep);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& f = *c[i].feature;
    double dot = 0, nf = 0, nr = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      dot += f[k] * rep[k];
      nf += f[k] * f[k];
      nr += rep[k] * rep[k];
    }
    EXPECT_NEAR(d[i], 1.0 - dot / std::sqrt(nf * nr), 1e-12);
  }
}

TEST(PositionalDistances, Examples) {
  const std::vector<Candidate> at{cand(7, 9, 1)};
  EXPECT_EQ(positional_distances(at, {7, 9})[0], 0.0);
  const std::vector<Candidate> c{cand(3, 4, 1), cand(6, 8, 1)};
  const auto d = positional_distances(c, {0, 0});
  EXPECT_DOUBLE_EQ(d[0], 5);
  EXPECT_DOUBLE_EQ(d[1], 10);
}

TEST(PositionalDistances, TranslationInvariant) {
  Gen gen(33);
  for (int k = 0; k < 200; ++k) {
    std::vector<Candidate> c, shifted;
    const double tx = gen.uniform(-50, 50), ty = gen.uniform(-50, 50);
    for (int i = 0; i < 4; ++i) {
      const double x = gen.uniform(0, 200), y = gen.uniform(0, 200);
      c.push_back(cand(x, y, 1));
      shifted.push_back(cand(x + tx, y + ty, 1));
    }
    const Point p{gen.uniform(0, 200), gen.uniform(0, 200)};
    const auto a = positional_distances(c, p);
    const auto b = positional_distances(shifted, {p.x + tx, p.y + ty});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(Fuse, SingleCandidateHasNoBias) {
  const std::vector<double> da{0.3}, de{42};
  const auto f = fuse(da, de, 1e-6);
  EXPECT_EQ(f.bias[0], 0.0);
  EXPECT_EQ(f.fused[0], 0.3);
}

TEST(Fuse, TwoCandidateHandExample) {
  const std::vector<double> da{0.2, 0.5}, de{10, 0};
  const auto f = fuse(da, de, 1e-6);
  EXPECT_NEAR(f.bias[0], 10.0 / (10.0 + 1e-6), 1e-15);
  EXPECT_NEAR(f.bias[0], 0.9999999, 1e-9);
  EXPECT_EQ(f.bias[1], 0.0);
  EXPECT_NEAR(f.fused[0], 1.2, 1e-6);
  EXPECT_NEAR(f.fused[1], 0.5, 1e-15);
  EXPECT_EQ(argmin(f.fused), 1u);
}

TEST(Fuse, EqualDistancesLeaveAppearance) {
  const std::vector<double> da{0.4, 0.1, 0.7}, de{3, 3, 3};
  const auto f = fuse(da, de, 1e-6);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(f.bias[i], 0.0);
    EXPECT_EQ(f.fused[i], da[i]);
  }
}

TEST(Fuse, LengthMismatchThrows) {
  const std::vector<double> da{0.1}, de{1, 2};
  EXPECT_THROW(fuse(da, de, 1e-6), Error);
}

TEST(FuseProperties, BiasInUnitInterval) {
  Gen gen(34);
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 16));
    const auto da = gen.values(n, 0, 2);
    const auto de = gen.values(n, 0, 500);
    for (const double b : fuse(da, de, 1e-6).bias) {
      EXPECT_GE(b, 0.0);
      EXPECT_LT(b, 1.0);
    }
  }
}

TEST(FuseProperties, CommonOffsetInvariance) {
  Gen gen(35);
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 16));
    const auto da = gen.values(n, 0, 2);
    const auto de = gen.values(n, 0, 500);
    auto moved = de;
    const double c = gen.uniform(0, 1000);
    for (auto& d : moved) d += c;
    const auto a = fuse(da, de, 1e-6);
    const auto b = fuse(da, moved, 1e-6);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(a.bias[i], b.bias[i], 1e-9);
      EXPECT_NEAR(a.fused[i], b.fused[i], 1e-9);
    }
    EXPECT_EQ(argmin(a.fused), argmin(b.fused));
  }
}

TEST(Argmin, LowestIndexWinsTies) {
  const std::vector<double> v{0.3, 0.1, 0.1, 0.2};
  EXPECT_EQ(argmin(v), 1u);
}

TEST(Select, SingleMatchingCandidateAccepted) {
  const auto rep = fv({0, 1});
  const std::vector<Candidate> c{cand(50, 50, 0.9, rep)};
  AssociationConfig cfg;
  cfg.accept_threshold_tracking = 0.0;
  const auto r = select(c, rep, Point{0, 0}, cfg);
  EXPECT_EQ(r.selected, 0u);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.breakdown->bias_applied());
}

TEST(Select, TrackingModeUsesFusedDistance) {
  // appearance [0.2, 0.5], displacement [10, 0] from the previous center
  const auto rep = fv({1, 0});
  const double c0 = 0.8, c1 = 0.5;
  const std::vector<Candidate> c{cand(10, 0, 1, fv({c0, std::sqrt(1 - c0 * c0)})),
                                 cand(0, 0, 1, fv({c1, std::sqrt(1 - c1 * c1)}))};
  AssociationConfig cfg;
  cfg.accept_threshold_tracking = 0.6;
  const auto r = select(c, rep, Point{0, 0}, cfg);
  EXPECT_EQ(r.selected, 1u);
  EXPECT_NEAR(r.breakdown->fused[0], 1.2, 1e-6);
  EXPECT_NEAR(r.breakdown->fused[1], 0.5, 1e-12);
  EXPECT_TRUE(r.accepted);
}

TEST(Select, LostModeIsAppearanceOnly) {
  const auto rep = fv({1, 0});
  const double c0 = 0.2, c1 = 0.8;
  const std::vector<Candidate> c{cand(0, 0, 1, fv({c0, std::sqrt(1 - c0 * c0)})),
                                 cand(500, 500, 1, fv({c1, std::sqrt(1 - c1 * c1)}))};
  AssociationConfig cfg;
  cfg.accept_threshold_lost = 0.35;
  const auto r = select(c, rep, std::nullopt, cfg);
  EXPECT_EQ(r.selected, 1u);
  EXPECT_TRUE(r.accepted);
  EXPECT_FALSE(r.breakdown->bias_applied());
  EXPECT_FALSE(r.breakdown->positional_raw.has_value());
  EXPECT_EQ(r.breakdown->fused, r.breakdown->appearance);
}

TEST(Select, RejectsAboveThreshold) {
  const auto rep = fv({1, 0});
  const std::vector<Candidate> c{cand(0, 0, 1, fv({0, 1}))};
  const auto r = select(c, rep, std::nullopt, AssociationConfig{});
  EXPECT_EQ(r.selected, 0u);
  EXPECT_FALSE(r.accepted);
}

TEST(Select, NoCandidatesGivesNoBreakdown) {
  const auto r = select({}, fv({1}), Point{0, 0}, AssociationConfig{});
  EXPECT_FALSE(r.selected.has_value());
  EXPECT_FALSE(r.breakdown.has_value());
  EXPECT_FALSE(r.accepted);
}

TEST(Select, AblationUsesOneMinusScore) {
  AssociationConfig cfg;
  cfg.use_appearance = false;
  const std::vector<Candidate> c{cand(0, 0, 0.7), cand(0, 0, 0.9)};
  const auto r = select(c, FeatureVector{}, std::nullopt, cfg);
  EXPECT_EQ(r.selected, 1u);
  EXPECT_NEAR(r.breakdown->appearance[0], 0.3, 1e-15);
}

TEST(SelectProperties, MatchesBruteForceOracle) {
  Gen gen(36);
  const AssociationConfig cfg;
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 16));
    const auto rep = gen.feature(6);
    std::vector<Candidate> c;
    for (std::size_t i = 0; i < n; ++i) {
      // occasional duplicates exercise tie breaking
      if (i > 0 && gen.coin(0.1)) {
        c.push_back(c[gen.index(i)]);
      } else {
        c.push_back(cand(gen.uniform(0, 300), gen.uniform(0, 300), 1, gen.feature(6)));
      }
    }
    std::optional<Point> prev;
    if (gen.coin(0.7)) prev = Point{gen.uniform(0, 300), gen.uniform(0, 300)};
    const auto expected = oracle_select(c, rep, prev, cfg.epsilon);
    const auto r = select(c, rep, prev, cfg);
    ASSERT_EQ(r.selected, expected.index) << "instance " << k;
    EXPECT_NEAR(r.breakdown->fused[expected.index], expected.fused, 1e-9);
  }
}

TEST(AssociationConfig, Validate) {
  AssociationConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.epsilon = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.accept_threshold_lost = -1;
  EXPECT_THROW(cfg.validate(), Error);
}
