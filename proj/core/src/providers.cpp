#include "siamreid/providers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

#include "json.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/random.hpp"

namespace siamreid {

using nlohmann::json;

// ---- oracle ----------------------------------------------------------------

OracleProvider::OracleProvider(OracleConfig config) : config_(config) {
  if (!(config_.base_score >= 0.0 && config_.base_score <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle base score must lie in [0, 1]");
  }
  if (!(config_.jitter_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle jitter must be >= 0");
  }
}

std::vector<Candidate> OracleProvider::propose(const Frame& frame,
                                               const SearchRegion& region) const {
  const auto* sim = std::get_if<SimPayload>(&frame.payload);
  if (sim == nullptr) {
    throw Error(ErrorCode::kWrongPayload, "oracle provider needs simulator frames");
  }
  const std::uint64_t jitter_seed = derive_seed(config_.seed, "jitter");
  std::vector<Candidate> out;
  for (const auto& obj : sim->objects) {
    if (obj.visibility <= 0.0) continue;
    BoundingBox box = obj.box;
    if (config_.jitter_sigma > 0.0) {
      Rng rng(derive_seed(jitter_seed, {static_cast<std::uint64_t>(frame.index),
                                        static_cast<std::uint64_t>(obj.id)}));
      std::normal_distribution<double> n(0.0, config_.jitter_sigma);
      const double cx = box.cx() + n(rng);
      const double cy = box.cy() + n(rng);
      const double w = std::max(1.0, box.width() + n(rng));
      const double h = std::max(1.0, box.height() + n(rng));
      try {
        box = clip_to_frame(BoundingBox::from_center(cx, cy, w, h), frame.dims);
      } catch (const Error&) {
        continue;
      }
    }
    if (!intersects(box, region.box)) continue;
    Candidate c;
    c.box = box;
    c.score = std::clamp(config_.base_score * obj.visibility, 0.0, 1.0);
    c.latent = LatentObservation{
        obj.latent, derive_seed(static_cast<std::uint64_t>(frame.index),
                                {static_cast<std::uint64_t>(obj.id)})};
    out.push_back(std::move(c));
  }
  // Detector-like order: by position, not by identity.
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::make_pair(a.box.cy(), a.box.cx()) < std::make_pair(b.box.cy(), b.box.cx());
  });
  return out;
}

// ---- interchange -----------------------------------------------------------

std::vector<Candidate> decode_anchor_grid(const AnchorGridRecord& record) {
  const auto anchors = generate_anchor_grid(record.grid);
  if (record.deltas.size() != anchors.size() || record.scores.size() != anchors.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "anchor grid expects " + std::to_string(anchors.size()) +
                    " deltas and scores");
  }
  std::vector<Candidate> out;
  out.reserve(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    Candidate c;
    c.box = decode_anchor(anchors[i], record.deltas[i]);
    c.score = record.scores[i];
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

double number_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw MalformedRecord(line, std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

std::vector<double> number_array(const json& value, const char* what, std::size_t line) {
  if (!value.is_array()) throw MalformedRecord(line, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) {
    if (!v.is_number()) {
      throw MalformedRecord(line, std::string(what) + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

double checked_score(double score, std::size_t line) {
  if (!(score >= 0.0 && score <= 1.0)) throw MalformedRecord(line, "score outside [0, 1]");
  return score;
}

AnchorGridRecord parse_anchor_grid(const json& obj, long frame, std::size_t line) {
  AnchorGridRecord rec;
  rec.frame = frame;
  const json& grid = obj.at("anchor_grid");
  if (!grid.is_object()) throw MalformedRecord(line, "anchor_grid must be an object");
  if (grid.contains("size")) rec.grid.size = static_cast<int>(number_field(grid, "size", line));
  if (grid.contains("stride")) rec.grid.stride = number_field(grid, "stride", line);
  if (grid.contains("base_size")) rec.grid.base_size = number_field(grid, "base_size", line);
  if (grid.contains("ratios")) rec.grid.ratios = number_array(grid.at("ratios"), "ratios", line);
  if (grid.contains("origin")) {
    const auto origin = number_array(grid.at("origin"), "origin", line);
    if (origin.size() != 2) throw MalformedRecord(line, "origin must have 2 entries");
    rec.grid.origin = {origin[0], origin[1]};
  }
  if (!obj.contains("deltas") || !obj.at("deltas").is_array()) {
    throw MalformedRecord(line, "anchor_grid record needs a 'deltas' array");
  }
  for (const auto& d : obj.at("deltas")) {
    const auto v = number_array(d, "delta", line);
    if (v.size() != 4) throw MalformedRecord(line, "each delta needs 4 entries");
    rec.deltas.push_back({v[0], v[1], v[2], v[3]});
  }
  if (!obj.contains("scores")) throw MalformedRecord(line, "anchor_grid record needs 'scores'");
  rec.scores = number_array(obj.at("scores"), "scores", line);
  for (const double s : rec.scores) checked_score(s, line);
  return rec;
}

}  // namespace

CandidateFile CandidateFile::parse(std::istream& in) {
  CandidateFile file;
  std::string text;
  std::size_t line = 0;
  long last_frame = std::numeric_limits<long>::min();
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw MalformedRecord(line, "record must be a JSON object");
    const auto frame_it = obj.find("frame");
    if (frame_it == obj.end() || !frame_it->is_number_integer()) {
      throw MalformedRecord(line, "missing integer field 'frame'");
    }
    const long frame = frame_it->get<long>();
    if (frame < last_frame) throw MalformedRecord(line, "frame indices must be non-decreasing");
    last_frame = frame;

    auto& bucket = file.frames_[frame];
    try {
      if (obj.contains("anchor_grid")) {
        auto decoded = decode_anchor_grid(parse_anchor_grid(obj, frame, line));
        bucket.insert(bucket.end(), decoded.begin(), decoded.end());
        continue;
      }
      const auto box_it = obj.find("box");
      if (box_it == obj.end()) throw MalformedRecord(line, "missing field 'box'");
      const auto box = number_array(*box_it, "box", line);
      if (box.size() != 4) throw MalformedRecord(line, "box needs 4 entries");
      if (!(box[2] > 0.0 && box[3] > 0.0)) throw MalformedRecord(line, "box size must be > 0");

      Candidate c;
      c.box = BoundingBox::from_corner(box[0], box[1], box[2], box[3]);
      c.score = checked_score(number_field(obj, "score", line), line);
      if (const auto f = obj.find("feature"); f != obj.end()) {
        c.feature = FeatureVector(number_array(*f, "feature", line));
      }
      bucket.push_back(std::move(c));
    } catch (const MalformedRecord&) {
      throw;
    } catch (const Error& e) {
      throw MalformedRecord(line, e.what());
    } catch (const json::exception& e) {
      throw MalformedRecord(line, e.what());
    }
  }
  return file;
}

CandidateFile CandidateFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open candidate file " + path.string());
  return parse(in);
}

const std::vector<Candidate>& CandidateFile::frame(long index) const {
  static const std::vector<Candidate> kNone;
  const auto it = frames_.find(index);
  return it == frames_.end() ? kNone : it->second;
}

void write_candidate_records(std::ostream& out, long frame,
                             std::span<const Candidate> candidates) {
  for (const auto& c : candidates) {
    const auto corner = c.box.corner();
    json rec = {{"frame", frame},
                {"box", {corner[0], corner[1], corner[2], corner[3]}},
                {"score", c.score}};
    if (c.feature) {
      rec["feature"] = std::vector<double>(c.feature->values().begin(),
                                           c.feature->values().end());
    }
    out << rec.dump() << '\n';
  }
}

void write_anchor_grid_record(std::ostream& out, const AnchorGridRecord& record) {
  json deltas = json::array();
  for (const auto& d : record.deltas) deltas.push_back({d.dx, d.dy, d.dw, d.dh});
  json rec = {{"frame", record.frame},
              {"anchor_grid",
               {{"size", record.grid.size},
                {"stride", record.grid.stride},
                {"base_size", record.grid.base_size},
                {"ratios", record.grid.ratios},
                {"origin", {record.grid.origin.x, record.grid.origin.y}}}},
              {"deltas", std::move(deltas)},
              {"scores", record.scores}};
  out << rec.dump() << '\n';
}

std::vector<Candidate> ExternalProvider::propose(const Frame& frame,
                                                 const SearchRegion& region) const {
  std::vector<Candidate> out;
  for (const auto& c : file_.frame(frame.index)) {
    if (intersects(c.box, region.box)) out.push_back(c);
  }
  return out;
}

// ---- NCC -------------------------------------------------------------------

GrayTemplate gray_template(const RasterImage& image, const BoundingBox& box) {
  const RasterImage patch = image.crop(box);
  GrayTemplate t{patch.width(), patch.height(), {}};
  t.values.reserve(static_cast<std::size_t>(t.width) * t.height);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) t.values.push_back(patch.gray(x, y));
  }
  return t;
}

GrayTemplate resize_template(const GrayTemplate& tmpl, int width, int height) {
  if (width == tmpl.width && height == tmpl.height) return tmpl;
  GrayTemplate out{width, height, std::vector<double>(static_cast<std::size_t>(width) * height)};
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(tmpl.height - 1, (y * tmpl.height) / height);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(tmpl.width - 1, (x * tmpl.width) / width);
      out.values[static_cast<std::size_t>(y) * width + x] =
          tmpl.values[static_cast<std::size_t>(sy) * tmpl.width + sx];
    }
  }
  return out;
}

NccMap ncc_map(const RasterImage& image, int x0, int y0, int width, int height,
               const GrayTemplate& tmpl) {
  NccMap map;
  if (tmpl.width > width || tmpl.height > height) return map;
  map.width = width - tmpl.width + 1;
  map.height = height - tmpl.height + 1;
  map.values.assign(static_cast<std::size_t>(map.width) * map.height,
                    std::numeric_limits<double>::quiet_NaN());

  const double n = static_cast<double>(tmpl.width) * tmpl.height;
  double t_mean = 0.0;
  for (const double v : tmpl.values) t_mean += v;
  t_mean /= n;
  std::vector<double> t_centered(tmpl.values.size());
  double t_norm2 = 0.0;
  for (std::size_t i = 0; i < tmpl.values.size(); ++i) {
    t_centered[i] = tmpl.values[i] - t_mean;
    t_norm2 += t_centered[i] * t_centered[i];
  }
  if (t_norm2 <= 1e-9 * n) return map;
  const double t_norm = std::sqrt(t_norm2);

  // gray values of the area plus integral images of I and I^2
  const std::size_t stride = static_cast<std::size_t>(width) + 1;
  std::vector<double> gray(static_cast<std::size_t>(width) * height);
  std::vector<double> sum(stride * (height + 1), 0.0);
  std::vector<double> sum_sq(stride * (height + 1), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double g = image.gray(x0 + x, y0 + y);
      gray[static_cast<std::size_t>(y) * width + x] = g;
      const std::size_t i = (y + 1) * stride + (x + 1);
      sum[i] = g + sum[i - 1] + sum[i - stride] - sum[i - stride - 1];
      sum_sq[i] = g * g + sum_sq[i - 1] + sum_sq[i - stride] - sum_sq[i - stride - 1];
    }
  }
  const auto box_sum = [&](const std::vector<double>& s, int x, int y) {
    const std::size_t a = y * stride + x;
    const std::size_t b = (y + tmpl.height) * stride + x;
    return s[b + tmpl.width] - s[a + tmpl.width] - s[b] + s[a];
  };

  for (int v = 0; v < map.height; ++v) {
    for (int u = 0; u < map.width; ++u) {
      const double s = box_sum(sum, u, v);
      const double var = box_sum(sum_sq, u, v) - s * s / n;
      if (var <= 1e-6 * n) continue;
      double cross = 0.0;
      for (int ty = 0; ty < tmpl.height; ++ty) {
        const double* row = &gray[static_cast<std::size_t>(v + ty) * width + u];
        const double* trow = &t_centered[static_cast<std::size_t>(ty) * tmpl.width];
        for (int tx = 0; tx < tmpl.width; ++tx) cross += row[tx] * trow[tx];
      }
      map.values[static_cast<std::size_t>(v) * map.width + u] =
          std::clamp(cross / (std::sqrt(var) * t_norm), -1.0, 1.0);
    }
  }
  return map;
}

NccProvider::NccProvider(NccConfig config) : config_(std::move(config)) {
  if (config_.scales.empty() || config_.max_peaks < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ncc provider needs scales and max_peaks >= 1");
  }
}

void NccProvider::initialize(const Frame& first, const BoundingBox& target) {
  const auto* image = std::get_if<RasterImage>(&first.payload);
  if (image == nullptr) throw Error(ErrorCode::kWrongPayload, "ncc provider needs raster frames");
  const GrayTemplate base = gray_template(*image, clip_to_frame(target, first.dims));
  templates_.clear();
  for (const double s : config_.scales) {
    const int w = std::max(2, static_cast<int>(std::lround(base.width * s)));
    const int h = std::max(2, static_cast<int>(std::lround(base.height * s)));
    templates_.push_back(resize_template(base, w, h));
  }
}

std::vector<Candidate> NccProvider::propose(const Frame& frame,
                                            const SearchRegion& region) const {
  const auto* image = std::get_if<RasterImage>(&frame.payload);
  if (image == nullptr) throw Error(ErrorCode::kWrongPayload, "ncc provider needs raster frames");
  if (templates_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ncc provider used before initialize()");
  }
  const int x0 = std::clamp(static_cast<int>(std::floor(region.box.x_min())), 0, image->width());
  const int y0 = std::clamp(static_cast<int>(std::floor(region.box.y_min())), 0, image->height());
  const int x1 = std::clamp(static_cast<int>(std::ceil(region.box.x_max())), 0, image->width());
  const int y1 = std::clamp(static_cast<int>(std::ceil(region.box.y_max())), 0, image->height());
  const int rw = x1 - x0;
  const int rh = y1 - y0;

  std::vector<Candidate> peaks;
  bool any_fits = false;
  for (const auto& tmpl : templates_) {
    if (tmpl.width > rw || tmpl.height > rh) continue;
    any_fits = true;
    const NccMap map = ncc_map(*image, x0, y0, rw, rh, tmpl);
    const auto at = [&map](int u, int v) {
      return map.values[static_cast<std::size_t>(v) * map.width + u];
    };
    for (int v = 0; v < map.height; ++v) {
      for (int u = 0; u < map.width; ++u) {
        const double value = at(u, v);
        if (std::isnan(value) || value < config_.ncc_floor) continue;
        bool is_peak = true;
        for (int dv = -1; dv <= 1 && is_peak; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            if (du == 0 && dv == 0) continue;
            const int nu = u + du;
            const int nv = v + dv;
            if (nu < 0 || nv < 0 || nu >= map.width || nv >= map.height) continue;
            const double other = at(nu, nv);
            if (std::isnan(other)) continue;
            // plateaus resolve to their first cell in raster order
            const bool earlier = dv < 0 || (dv == 0 && du < 0);
            if (earlier ? other >= value : other > value) {
              is_peak = false;
              break;
            }
          }
        }
        if (!is_peak) continue;
        Candidate c;
        c.box = BoundingBox::from_corner(x0 + u, y0 + v, tmpl.width, tmpl.height);
        c.score = std::clamp(0.5 * (value + 1.0), 0.0, 1.0);
        peaks.push_back(std::move(c));
      }
    }
  }
  if (!any_fits) {
    throw Error(ErrorCode::kRegionSmallerThanTemplate,
                "search region " + std::to_string(rw) + "x" + std::to_string(rh) +
                    " is smaller than the template");
  }
  return non_maximum_suppression(std::move(peaks), config_.nms_iou, config_.max_peaks);
}

std::vector<Candidate> non_maximum_suppression(std::vector<Candidate> candidates,
                                               double iou_threshold, std::size_t max_keep) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
  std::vector<Candidate> kept;
  for (auto& c : candidates) {
    if (kept.size() >= max_keep) break;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
      return iou(k.box, c.box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(std::move(c));
  }
  return kept;
}

// ---- histogram -------------------------------------------------------------

FeatureVector histogram_embed(const RasterImage& patch) {
  if (patch.width() < 4 || patch.height() < 4) {
    throw Error(ErrorCode::kPatchTooSmall,
                "patch " + std::to_string(patch.width()) + "x" +
                    std::to_string(patch.height()) + " is below 4x4");
  }
  constexpr std::size_t kBlock = 3 * kHistogramBins;
  std::vector<double> hist(kHistogramDimension, 0.0);
  const int mid_x = patch.width() / 2;
  const int mid_y = patch.height() / 2;
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) {
      const std::size_t block = (y < mid_y ? 0 : 2) + (x < mid_x ? 0 : 1);
      for (int ch = 0; ch < 3; ++ch) {
        const std::size_t bin = patch.at(x, y, ch) * kHistogramBins / 256;
        hist[block * kBlock + ch * kHistogramBins + bin] += 1.0;
      }
    }
  }
  for (std::size_t b = 0; b < 4; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < kBlock; ++i) total += hist[b * kBlock + i];
    for (std::size_t i = 0; i < kBlock; ++i) hist[b * kBlock + i] /= total;
  }
  return FeatureVector(std::move(hist));
}

FeatureVector HistogramEmbedder::embed(const AppearanceObservation& observation) const {
  const auto* patch = std::get_if<PixelPatch>(&observation);
  if (patch == nullptr) {
    throw Error(ErrorCode::kWrongPayload, "histogram embedder needs a pixel patch");
  }
  return histogram_embed(patch->image);
}

}  // namespace siamreid
