#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "siamreid/geometry.hpp"

namespace siamreid {

using BoxTrack = std::vector<std::optional<BoundingBox>>;

/// Predictions aligned frame by frame with ground truth. A missing
/// ground-truth entry means "not annotated" and the frame is not scored.
struct SequenceResult {
  std::string name;
  BoxTrack predictions;
  BoxTrack ground_truth;
};

inline constexpr std::size_t kSuccessSteps = 21;    // 0.00, 0.05, ..., 1.00
inline constexpr std::size_t kPrecisionSteps = 51;  // 0, 1, ..., 50 px

struct SuccessCurve {
  std::array<double, kSuccessSteps> thresholds{};
  std::array<double, kSuccessSteps> values{};
  double auc = 0.0;
};

struct PrecisionCurve {
  std::array<double, kPrecisionSteps> thresholds{};
  std::array<double, kPrecisionSteps> values{};
  double precision_at_20 = 0.0;
};

struct ARScore {
  double accuracy = 0.0;
  double robustness = 0.0;
};

struct EvaluationSummary {
  SuccessCurve success;
  PrecisionCurve precision;
  ARScore ar;
};

std::array<double, kSuccessSteps> success_thresholds();
std::array<double, kPrecisionSteps> precision_thresholds();

// All metrics skip frame 0 (the initialization frame) and frames without
// ground truth. Each throws kNoAnnotatedFrames if nothing is left to score
// and kInvalidArgument if the two tracks differ in length.

/// Fraction of scored frames with iou > threshold; a missing prediction has
/// iou 0. auc is the mean over the 21 thresholds.
SuccessCurve success_curve(const SequenceResult& result);

/// Fraction of scored frames with center error <= threshold pixels; a
/// missing prediction has infinite error.
PrecisionCurve precision_curve(const SequenceResult& result);

/// accuracy: mean iou over scored frames with a prediction and iou > 0
/// (0 if none); robustness: share of scored frames in that set.
ARScore accuracy_robustness(const SequenceResult& result);

EvaluationSummary evaluate(const SequenceResult& result);

/// Unweighted per-threshold mean over sequences; AR averaged per sequence.
/// Throws kEmptyInput.
EvaluationSummary aggregate(std::span<const SequenceResult> results);
EvaluationSummary aggregate_summaries(std::span<const EvaluationSummary> summaries);

// ---- text formats ----------------------------------------------------------

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

/// One box per line as x_min,y_min,w,h. Blank lines, NaN fields and
/// non-positive sizes read as "absent"; lines starting with '#' are skipped.
BoxTrack read_box_track(std::istream& in);
BoxTrack load_box_track(const std::filesystem::path& path);

/// Writes `# key: value` header lines, then one line per frame with
/// NaN,NaN,NaN,NaN for absent boxes.
void write_box_track(std::ostream& out, const BoxTrack& boxes,
                     std::span<const std::string> header = {});

void write_curve_csv(std::ostream& out, std::span<const double> thresholds,
                     std::span<const double> values);

struct SummaryRow {
  std::string sequence;
  EvaluationSummary summary;
};

/// sequence,auc,precision20,accuracy,robustness
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace siamreid
