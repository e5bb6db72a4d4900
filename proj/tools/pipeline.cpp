#include "pipeline.hpp"

#include <fstream>

#include "json.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/random.hpp"
#include "siamreid/version.hpp"

namespace siamreid::app {

namespace fs = std::filesystem;

namespace {

bool has_ppm(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return false;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".ppm") return true;
  }
  return false;
}

std::shared_ptr<const FrameSource> empty_frames_from_meta(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    const auto meta = nlohmann::json::parse(in);
    const FrameDims dims{meta.at("width").get<int>(), meta.at("height").get<int>()};
    const auto count = meta.at("num_frames").get<std::size_t>();
    if (dims.width < 1 || dims.height < 1 || count < 1) {
      throw Error(ErrorCode::kIoError, path.string() + ": sizes must be >= 1");
    }
    return std::make_shared<EmptyFrameSource>(dims, count);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIoError, path.string() + ": " + e.what());
  }
}

}  // namespace

Sequence load_sequence(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, "sequence directory not found: " + dir.string());
  }
  Sequence seq;
  seq.dir = dir;
  seq.name = dir.filename().empty() ? dir.parent_path().filename().string()
                                    : dir.filename().string();

  const fs::path init_path = dir / "init.txt";
  if (!fs::exists(init_path)) {
    throw Error(ErrorCode::kIoError, "missing init box file: " + init_path.string());
  }
  const BoxTrack init = load_box_track(init_path);
  if (init.empty() || !init.front()) {
    throw Error(ErrorCode::kIoError, init_path.string() + ": first line must be x_min,y_min,w,h");
  }
  seq.initial_box = *init.front();

  if (fs::exists(dir / "scenario.json")) {
    seq.scenario = load_scenario(dir / "scenario.json");
    seq.frames = std::make_shared<VectorFrameSource>(seq.scenario->frames);
  } else if (has_ppm(dir / "img")) {
    seq.frames = std::make_shared<PpmDirectorySource>(dir / "img");
  } else if (has_ppm(dir)) {
    seq.frames = std::make_shared<PpmDirectorySource>(dir);
  } else if (fs::exists(dir / "sequence.json")) {
    seq.frames = empty_frames_from_meta(dir / "sequence.json");
  } else {
    throw Error(ErrorCode::kIoError,
                "no frames in " + dir.string() +
                    " (expected scenario.json, PPM images or sequence.json)");
  }

  if (fs::exists(dir / "groundtruth.txt")) seq.ground_truth = load_box_track(dir / "groundtruth.txt");
  return seq;
}

BoxTrack target_ground_truth(const Scenario& scenario) {
  BoxTrack gt;
  const auto& target = scenario.target();
  for (std::size_t t = 0; t < target.trajectory.size(); ++t) {
    if (target.visible[t]) {
      gt.emplace_back(target.trajectory[t]);
    } else {
      gt.emplace_back();
    }
  }
  return gt;
}

Sequence sequence_from_scenario(Scenario scenario, std::string name) {
  Sequence seq;
  seq.name = std::move(name);
  seq.initial_box = scenario.target().trajectory.front();
  seq.ground_truth = target_ground_truth(scenario);
  seq.frames = std::make_shared<VectorFrameSource>(scenario.frames);
  seq.scenario = std::move(scenario);
  return seq;
}

std::vector<FrameOutput> track(const RunConfig& config, const Sequence& sequence) {
  std::shared_ptr<CandidateProvider> provider;
  if (config.provider == "oracle") {
    if (!sequence.scenario) {
      throw Error(ErrorCode::kConfigError, "provider 'oracle' needs a scenario sequence");
    }
    provider = std::make_shared<OracleProvider>(OracleConfig{
        config.oracle_base_score, sequence.scenario->config.box_jitter_sigma, config.seed});
  } else if (config.provider == "external") {
    fs::path path = config.candidates_path;
    if (path.is_relative() && !sequence.dir.empty()) path = sequence.dir / path;
    provider = std::make_shared<ExternalProvider>(CandidateFile::load(path));
  } else {
    provider = std::make_shared<NccProvider>(config.ncc);
  }

  std::shared_ptr<const Embedder> embedder;
  if (config.embedder == "identity") {
    embedder = std::make_shared<IdentityEmbedder>(config.embedder_noise_sigma,
                                                  derive_seed(config.seed, "embedder"));
  } else if (config.embedder == "histogram") {
    embedder = std::make_shared<HistogramEmbedder>();
  } else {
    embedder = std::make_shared<ExternalEmbedder>();
  }

  Tracker tracker(config.tracker, std::move(provider), std::move(embedder));
  return run_sequence(*sequence.frames, sequence.initial_box, tracker);
}

BoxTrack reported_boxes(const std::vector<FrameOutput>& outputs) {
  BoxTrack boxes;
  boxes.reserve(outputs.size());
  for (const auto& o : outputs) boxes.push_back(o.box);
  return boxes;
}

std::vector<std::string> provenance(const RunConfig& config, const std::string& sequence) {
  return {std::string("siamreid ") + kVersion, "config_hash: " + config_hash(config),
          "seed: " + std::to_string(config.seed), "sequence: " + sequence};
}

}  // namespace siamreid::app
