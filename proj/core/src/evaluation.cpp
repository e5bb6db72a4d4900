#include "siamreid/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "siamreid/errors.hpp"

namespace siamreid {

std::array<double, kSuccessSteps> success_thresholds() {
  std::array<double, kSuccessSteps> t{};
  for (std::size_t i = 0; i < kSuccessSteps; ++i) t[i] = static_cast<double>(i) / 20.0;
  return t;
}

std::array<double, kPrecisionSteps> precision_thresholds() {
  std::array<double, kPrecisionSteps> t{};
  for (std::size_t i = 0; i < kPrecisionSteps; ++i) t[i] = static_cast<double>(i);
  return t;
}

namespace {

struct ScoredFrame {
  double overlap;         // 0 when no prediction
  double center_error;    // +inf when no prediction
  bool predicted;
};

std::vector<ScoredFrame> scored_frames(const SequenceResult& result) {
  if (result.predictions.size() != result.ground_truth.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                result.name + ": " + std::to_string(result.predictions.size()) +
                    " predictions vs " + std::to_string(result.ground_truth.size()) +
                    " ground-truth frames");
  }
  std::vector<ScoredFrame> frames;
  for (std::size_t i = 1; i < result.ground_truth.size(); ++i) {
    const auto& gt = result.ground_truth[i];
    if (!gt) continue;
    const auto& pred = result.predictions[i];
    if (pred) {
      frames.push_back({iou(*pred, *gt), center_distance(*pred, *gt), true});
    } else {
      frames.push_back({0.0, std::numeric_limits<double>::infinity(), false});
    }
  }
  if (frames.empty()) {
    throw Error(ErrorCode::kNoAnnotatedFrames, result.name + ": no annotated frames to score");
  }
  return frames;
}

double mean(std::span<const double> values) {
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace

SuccessCurve success_curve(const SequenceResult& result) {
  const auto frames = scored_frames(result);
  SuccessCurve curve;
  curve.thresholds = success_thresholds();
  for (std::size_t k = 0; k < kSuccessSteps; ++k) {
    const auto hits = std::count_if(frames.begin(), frames.end(), [&](const ScoredFrame& f) {
      return f.predicted && f.overlap > curve.thresholds[k];
    });
    curve.values[k] = static_cast<double>(hits) / static_cast<double>(frames.size());
  }
  curve.auc = mean(curve.values);
  return curve;
}

PrecisionCurve precision_curve(const SequenceResult& result) {
  const auto frames = scored_frames(result);
  PrecisionCurve curve;
  curve.thresholds = precision_thresholds();
  for (std::size_t k = 0; k < kPrecisionSteps; ++k) {
    const auto hits = std::count_if(frames.begin(), frames.end(), [&](const ScoredFrame& f) {
      return f.center_error <= curve.thresholds[k];
    });
    curve.values[k] = static_cast<double>(hits) / static_cast<double>(frames.size());
  }
  curve.precision_at_20 = curve.values[20];
  return curve;
}

ARScore accuracy_robustness(const SequenceResult& result) {
  const auto frames = scored_frames(result);
  double overlap_sum = 0.0;
  std::size_t held = 0;
  for (const auto& f : frames) {
    if (f.predicted && f.overlap > 0.0) {
      overlap_sum += f.overlap;
      ++held;
    }
  }
  ARScore score;
  score.accuracy = held == 0 ? 0.0 : overlap_sum / static_cast<double>(held);
  score.robustness = static_cast<double>(held) / static_cast<double>(frames.size());
  return score;
}

EvaluationSummary evaluate(const SequenceResult& result) {
  return {success_curve(result), precision_curve(result), accuracy_robustness(result)};
}

EvaluationSummary aggregate_summaries(std::span<const EvaluationSummary> summaries) {
  if (summaries.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to aggregate");
  const double n = static_cast<double>(summaries.size());
  EvaluationSummary out;
  out.success.thresholds = success_thresholds();
  out.precision.thresholds = precision_thresholds();
  for (const auto& s : summaries) {
    for (std::size_t k = 0; k < kSuccessSteps; ++k) out.success.values[k] += s.success.values[k];
    for (std::size_t k = 0; k < kPrecisionSteps; ++k) {
      out.precision.values[k] += s.precision.values[k];
    }
    out.ar.accuracy += s.ar.accuracy;
    out.ar.robustness += s.ar.robustness;
  }
  for (double& v : out.success.values) v /= n;
  for (double& v : out.precision.values) v /= n;
  out.ar.accuracy /= n;
  out.ar.robustness /= n;
  out.success.auc = mean(out.success.values);
  out.precision.precision_at_20 = out.precision.values[20];
  return out;
}

EvaluationSummary aggregate(std::span<const SequenceResult> results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to aggregate");
  std::vector<EvaluationSummary> summaries;
  summaries.reserve(results.size());
  for (const auto& r : results) summaries.push_back(evaluate(r));
  return aggregate_summaries(summaries);
}

// ---- text formats ----------------------------------------------------------

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_field(const std::string& token, std::size_t line) {
  const std::string t = trim(token);
  if (t == "NaN" || t == "nan" || t == "NAN") return std::nullopt;
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw MalformedRecord(line, "not a number: '" + t + "'");
  }
  return value;
}

}  // namespace

BoxTrack read_box_track(std::istream& in) {
  BoxTrack boxes;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '#') continue;
    if (t.empty()) {
      boxes.emplace_back();
      continue;
    }
    std::vector<std::string> tokens;
    std::string token;
    std::istringstream fields(t);
    const char sep = t.find(',') != std::string::npos ? ',' : (t.find('\t') != std::string::npos ? '\t' : ' ');
    while (std::getline(fields, token, sep)) {
      if (sep == ' ' && token.empty()) continue;
      tokens.push_back(token);
    }
    if (tokens.size() != 4) throw MalformedRecord(line, "expected 4 fields x_min,y_min,w,h");
    std::array<std::optional<double>, 4> v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = parse_field(tokens[i], line);
    const bool complete = std::all_of(v.begin(), v.end(), [](const auto& x) {
      return x.has_value() && std::isfinite(*x);
    });
    if (!complete || *v[2] <= 0.0 || *v[3] <= 0.0) {
      boxes.emplace_back();
      continue;
    }
    boxes.emplace_back(BoundingBox::from_corner(*v[0], *v[1], *v[2], *v[3]));
  }
  return boxes;
}

BoxTrack load_box_track(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_box_track(in);
}

void write_box_track(std::ostream& out, const BoxTrack& boxes,
                     std::span<const std::string> header) {
  for (const auto& h : header) out << "# " << h << '\n';
  for (const auto& b : boxes) {
    if (!b) {
      out << "NaN,NaN,NaN,NaN\n";
      continue;
    }
    const auto c = b->corner();
    out << format_number(c[0]) << ',' << format_number(c[1]) << ',' << format_number(c[2])
        << ',' << format_number(c[3]) << '\n';
  }
}

void write_curve_csv(std::ostream& out, std::span<const double> thresholds,
                     std::span<const double> values) {
  out << "threshold,value\n";
  for (std::size_t i = 0; i < thresholds.size() && i < values.size(); ++i) {
    out << format_number(thresholds[i]) << ',' << format_number(values[i]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "sequence,auc,precision20,accuracy,robustness\n";
  for (const auto& r : rows) {
    out << r.sequence << ',' << format_number(r.summary.success.auc) << ','
        << format_number(r.summary.precision.precision_at_20) << ','
        << format_number(r.summary.ar.accuracy) << ',' << format_number(r.summary.ar.robustness)
        << '\n';
  }
}

}  // namespace siamreid
