#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "siamreid/association.hpp"
#include "siamreid/embedding.hpp"
#include "siamreid/frame.hpp"
#include "siamreid/geometry.hpp"

namespace siamreid {

/// Stand-in for the detection heads of a Siamese tracker: scored boxes in
/// image space. Returned boxes intersect the query region, scores lie in
/// [0, 1] and the order is deterministic for fixed inputs.
class CandidateProvider {
 public:
  virtual ~CandidateProvider() = default;

  virtual std::string name() const = 0;

  /// Called once with the first frame and the target box.
  virtual void initialize(const Frame& /*first*/, const BoundingBox& /*target*/) {}

  virtual std::vector<Candidate> propose(const Frame& frame,
                                         const SearchRegion& region) const = 0;
};

struct OracleConfig {
  double base_score = 0.9;
  double jitter_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Reads the simulator's ground truth: one candidate per visible object
/// intersecting the region, in raster order of box centers.
class OracleProvider final : public CandidateProvider {
 public:
  explicit OracleProvider(OracleConfig config = {});

  std::string name() const override { return "oracle"; }
  std::vector<Candidate> propose(const Frame& frame,
                                 const SearchRegion& region) const override;

 private:
  OracleConfig config_;
};

// ---- candidate interchange (JSON Lines) ------------------------------------

/// Raw region-proposal output for one frame: an anchor grid plus one
/// (dx, dy, dw, dh) delta and one score per anchor.
struct AnchorGridRecord {
  long frame = 0;
  AnchorGridSpec grid;
  std::vector<RegressionDelta> deltas;
  std::vector<double> scores;
};

/// Decodes every anchor of the record into a candidate.
std::vector<Candidate> decode_anchor_grid(const AnchorGridRecord& record);

/// Candidates per frame, as loaded from an interchange file.
class CandidateFile {
 public:
  /// Throws MalformedRecord (with 1-based line number) on bad input.
  static CandidateFile parse(std::istream& in);
  static CandidateFile load(const std::filesystem::path& path);

  /// Empty when the frame has no records.
  const std::vector<Candidate>& frame(long index) const;
  const std::map<long, std::vector<Candidate>>& frames() const noexcept { return frames_; }

 private:
  std::map<long, std::vector<Candidate>> frames_;
};

/// One line per candidate: {"frame", "box": [x_min, y_min, w, h], "score",
/// optional "feature"}.
void write_candidate_records(std::ostream& out, long frame,
                             std::span<const Candidate> candidates);
void write_anchor_grid_record(std::ostream& out, const AnchorGridRecord& record);

class ExternalProvider final : public CandidateProvider {
 public:
  explicit ExternalProvider(CandidateFile file) : file_(std::move(file)) {}

  std::string name() const override { return "external"; }
  std::vector<Candidate> propose(const Frame& frame,
                                 const SearchRegion& region) const override;

 private:
  CandidateFile file_;
};

// ---- normalized cross-correlation baseline ---------------------------------

struct NccConfig {
  std::vector<double> scales = {0.95, 1.0, 1.05};
  double ncc_floor = 0.5;
  std::size_t max_peaks = 8;
  double nms_iou = 0.5;
};

struct NccMap {
  int width = 0;   // number of horizontal template offsets
  int height = 0;  // number of vertical template offsets
  std::vector<double> values;  // NaN where the window has zero variance
};

/// Grayscale (r+g+b)/3 template.
struct GrayTemplate {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

GrayTemplate gray_template(const RasterImage& image, const BoundingBox& box);

/// Nearest-neighbour resample.
GrayTemplate resize_template(const GrayTemplate& tmpl, int width, int height);

/// NCC of the template at every offset of `area` (integer pixel rectangle
/// given by its top-left corner and size) inside the image.
NccMap ncc_map(const RasterImage& image, int x0, int y0, int width, int height,
               const GrayTemplate& tmpl);

/// Template matcher over the search region. The template is captured in
/// initialize(); propose() is read-only afterwards.
class NccProvider final : public CandidateProvider {
 public:
  explicit NccProvider(NccConfig config = {});

  std::string name() const override { return "ncc"; }
  void initialize(const Frame& first, const BoundingBox& target) override;
  std::vector<Candidate> propose(const Frame& frame,
                                 const SearchRegion& region) const override;

  bool has_template() const noexcept { return !templates_.empty(); }

 private:
  NccConfig config_;
  std::vector<GrayTemplate> templates_;  // one per scale
};

/// Greedy NMS on score order (ties keep earlier entries); drops boxes whose
/// IoU with a kept box exceeds iou_threshold, keeps at most max_keep.
std::vector<Candidate> non_maximum_suppression(std::vector<Candidate> candidates,
                                               double iou_threshold, std::size_t max_keep);

// ---- histogram embedder ----------------------------------------------------

inline constexpr std::size_t kHistogramBins = 16;
inline constexpr std::size_t kHistogramDimension = 3 * kHistogramBins * 4;

/// Per-channel 16-bin histograms over a 2x2 grid, each block L1-normalized.
/// Layout: block (row-major) x channel x bin. Throws kPatchTooSmall below 4x4.
FeatureVector histogram_embed(const RasterImage& patch);

class HistogramEmbedder final : public Embedder {
 public:
  std::string name() const override { return "histogram"; }
  std::size_t dimension() const noexcept override { return kHistogramDimension; }
  FeatureVector embed(const AppearanceObservation& observation) const override;
};

}  // namespace siamreid
