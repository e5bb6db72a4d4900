#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "siamreid/association.hpp"
#include "siamreid/embedding.hpp"
#include "siamreid/geometry.hpp"
#include "siamreid/random.hpp"

namespace siamreid::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  BoundingBox box(double extent = 200.0, double max_size = 60.0) {
    return BoundingBox::from_corner(uniform(-extent / 4, extent), uniform(-extent / 4, extent),
                                    uniform(0.5, max_size), uniform(0.5, max_size));
  }

  FeatureVector feature(std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = normal();
    return FeatureVector(std::move(v));
  }

  std::vector<double> values(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  Rng& engine() { return rng_; }

 private:
  Rng rng_;
};

}  // namespace siamreid::testing
