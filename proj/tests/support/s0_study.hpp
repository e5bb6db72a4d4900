#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siamreid/simulator.hpp"
#include "siamreid/tracker.hpp"

namespace siamreid::testing {

/// The confuser-rejection scenario: 200x200, 300 frames, 4 confusers at
/// similarity 0.7, appearance noise 0.05, target hidden on [100, 130).
ScenarioConfig s0_config(std::uint64_t seed);

inline constexpr long kOcclusionStart = 100;
inline constexpr long kOcclusionEnd = 130;
inline constexpr long kReacquireWindow = 10;

struct S0Run {
  Scenario scenario;
  std::vector<FrameOutput> outputs;
};

S0Run run_s0(std::uint64_t seed, const TrackerConfig& config);

/// Reported box overlaps the target by > 0.5 on some frame in
/// [reappearance, reappearance + 10], and the last reported box overlaps the
/// target more than any other object.
bool reacquired(const S0Run& run);

/// Empty when every output's selection agrees with a brute-force
/// re-evaluation of its breakdown; otherwise a description of the first
/// disagreement.
std::string association_disagreement(const S0Run& run, const AssociationConfig& config);

/// Empty when the occluded frames obey the lost-mode contract.
std::string lost_mode_violation(const S0Run& run);

}  // namespace siamreid::testing
