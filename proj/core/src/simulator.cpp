#include "siamreid/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "json.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/random.hpp"

namespace siamreid {

using nlohmann::json;

namespace {

[[noreturn]] void infeasible(const std::string& message) {
  throw Error(ErrorCode::kInfeasibleConfig, message);
}

std::vector<double> gaussian_vector(Rng& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& x : v) x = n(rng);
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

FeatureVector random_unit(Rng& rng, int dim) {
  for (;;) {
    FeatureVector v(gaussian_vector(rng, dim));
    if (v.norm() > 1e-12) return v.normalized();
  }
}

// Unit vector at cosine similarity `target_cos` (+-0.02) to `target`, built
// in the plane of the target and a random orthogonal direction.
FeatureVector confuser_latent(Rng& rng, const FeatureVector& target, double target_cos) {
  std::uniform_real_distribution<double> spread(-0.02, 0.02);
  for (;;) {
    auto u = gaussian_vector(rng, static_cast<int>(target.dimension()));
    const double proj = dot(u, target.values());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= proj * target[i];
    FeatureVector ortho(std::move(u));
    if (ortho.norm() < 1e-9) continue;
    ortho = ortho.normalized();

    const double s = std::clamp(target_cos + spread(rng), -1.0, 0.9999);
    const double c = std::sqrt(1.0 - s * s);
    std::vector<double> out(target.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * target[i] + c * ortho[i];
    FeatureVector latent = FeatureVector(std::move(out)).normalized();
    const double measured = dot(latent.values(), target.values());
    if (std::abs(measured - target_cos) <= 0.02) return latent;
  }
}

struct Walker {
  double x_min;
  double y_min;
  double heading;
};

void advance(Walker& w, double speed, double width, double height, FrameDims frame) {
  w.x_min += speed * std::cos(w.heading);
  w.y_min += speed * std::sin(w.heading);
  const double max_x = frame.width - width;
  const double max_y = frame.height - height;
  // reflect off the borders
  if (w.x_min < 0.0) {
    w.x_min = -w.x_min;
    w.heading = std::numbers::pi - w.heading;
  } else if (w.x_min > max_x) {
    w.x_min = 2.0 * max_x - w.x_min;
    w.heading = std::numbers::pi - w.heading;
  }
  if (w.y_min < 0.0) {
    w.y_min = -w.y_min;
    w.heading = -w.heading;
  } else if (w.y_min > max_y) {
    w.y_min = 2.0 * max_y - w.y_min;
    w.heading = -w.heading;
  }
  w.x_min = std::clamp(w.x_min, 0.0, max_x);
  w.y_min = std::clamp(w.y_min, 0.0, max_y);
}

bool target_visible(const ScenarioConfig& config, long frame) {
  return std::none_of(config.occlusion_windows.begin(), config.occlusion_windows.end(),
                      [frame](const OcclusionWindow& w) { return w.contains(frame); });
}

}  // namespace

void ScenarioConfig::validate() const {
  if (frame.width < 1 || frame.height < 1) infeasible("frame dimensions must be >= 1");
  if (num_frames < 1) infeasible("num_frames must be >= 1");
  if (num_confusers < 0) infeasible("num_confusers must be >= 0");
  if (!(confuser_similarity >= 0.0 && confuser_similarity < 1.0)) {
    infeasible("confuser_similarity must lie in [0, 1)");
  }
  for (const auto& w : occlusion_windows) {
    if (w.start < 1 || w.end > num_frames || w.start >= w.end) {
      infeasible("occlusion window [" + std::to_string(w.start) + ", " +
                 std::to_string(w.end) + ") outside [1, num_frames); frame 0 shows the target");
    }
  }
  if (!(appearance_noise_sigma >= 0.0)) infeasible("appearance_noise_sigma must be >= 0");
  if (!(box_jitter_sigma >= 0.0)) infeasible("box_jitter_sigma must be >= 0");
  if (!(motion.speed >= 0.0)) infeasible("motion speed must be >= 0");
  if (!(motion.direction_change_probability >= 0.0 &&
        motion.direction_change_probability <= 1.0)) {
    infeasible("direction_change_probability must lie in [0, 1]");
  }
  if (!(object_width > 0.0 && object_height > 0.0) || object_width > frame.width ||
      object_height > frame.height) {
    infeasible("object size must be positive and fit the frame");
  }
  if (latent_dim < 2) infeasible("latent_dim must be >= 2");
}

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Rng rng(derive_seed(config.seed, "simulator"));

  Scenario scenario;
  scenario.config = config;
  const int count = config.num_confusers + 1;

  const FeatureVector target_latent = random_unit(rng, config.latent_dim);

  // disjoint placement at t = 0
  std::uniform_real_distribution<double> ux(0.0, config.frame.width - config.object_width);
  std::uniform_real_distribution<double> uy(0.0, config.frame.height - config.object_height);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Walker> walkers;
  for (int id = 0; id < count; ++id) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const double x = ux(rng);
      const double y = uy(rng);
      const auto box = BoundingBox::from_corner(x, y, config.object_width, config.object_height);
      placed = std::none_of(walkers.begin(), walkers.end(), [&](const Walker& w) {
        return intersects(box, BoundingBox::from_corner(w.x_min, w.y_min, config.object_width,
                                                        config.object_height));
      });
      if (placed) walkers.push_back({x, y, angle(rng)});
    }
    if (!placed) {
      infeasible("cannot place " + std::to_string(count) + " disjoint objects in a " +
                 std::to_string(config.frame.width) + "x" +
                 std::to_string(config.frame.height) + " frame");
    }
  }

  for (int id = 0; id < count; ++id) {
    SimObject obj;
    obj.id = id;
    obj.latent = id == 0 ? target_latent
                         : confuser_latent(rng, target_latent, config.confuser_similarity);
    scenario.objects.push_back(std::move(obj));
  }

  std::bernoulli_distribution turn(config.motion.direction_change_probability);
  for (long t = 0; t < config.num_frames; ++t) {
    for (int id = 0; id < count; ++id) {
      Walker& w = walkers[static_cast<std::size_t>(id)];
      if (t > 0) {
        if (turn(rng)) w.heading = angle(rng);
        advance(w, config.motion.speed, config.object_width, config.object_height,
                config.frame);
      }
      auto& obj = scenario.objects[static_cast<std::size_t>(id)];
      obj.trajectory.push_back(
          BoundingBox::from_corner(w.x_min, w.y_min, config.object_width, config.object_height));
      obj.visible.push_back(id != 0 || target_visible(config, t));
    }
  }

  scenario.frames = render_frames(config, scenario.objects);
  return scenario;
}

std::vector<Frame> render_frames(const ScenarioConfig& config,
                                 const std::vector<SimObject>& objects) {
  const std::uint64_t noise_seed = derive_seed(config.seed, "noise");
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(config.num_frames));
  for (long t = 0; t < config.num_frames; ++t) {
    SimPayload payload;
    for (const auto& obj : objects) {
      SimObservation ob;
      ob.id = obj.id;
      ob.box = obj.trajectory.at(static_cast<std::size_t>(t));
      ob.visibility = obj.visible.at(static_cast<std::size_t>(t)) ? 1.0 : 0.0;
      if (config.appearance_noise_sigma > 0.0) {
        Rng rng(derive_seed(noise_seed, {static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(obj.id)}));
        std::normal_distribution<double> n(0.0, config.appearance_noise_sigma);
        std::vector<double> v(obj.latent.values().begin(), obj.latent.values().end());
        for (double& x : v) x += n(rng);
        ob.latent = FeatureVector(std::move(v)).normalized();
      } else {
        ob.latent = obj.latent;
      }
      payload.objects.push_back(std::move(ob));
    }
    frames.push_back({t, config.frame, std::move(payload)});
  }
  return frames;
}

std::vector<GroundTruthEntry> ground_truth(const Scenario& scenario, long frame_index) {
  if (frame_index < 0 || frame_index >= scenario.config.num_frames) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "frame " + std::to_string(frame_index) + " outside the scenario");
  }
  std::vector<GroundTruthEntry> out;
  const auto t = static_cast<std::size_t>(frame_index);
  for (const auto& obj : scenario.objects) {
    out.push_back({obj.id, obj.trajectory[t], static_cast<bool>(obj.visible[t])});
  }
  return out;
}

// ---- JSON ------------------------------------------------------------------

namespace {

json config_to_json(const ScenarioConfig& c) {
  json windows = json::array();
  for (const auto& w : c.occlusion_windows) windows.push_back({w.start, w.end});
  return {{"width", c.frame.width},
          {"height", c.frame.height},
          {"num_frames", c.num_frames},
          {"num_confusers", c.num_confusers},
          {"confuser_similarity", c.confuser_similarity},
          {"occlusion_windows", std::move(windows)},
          {"appearance_noise_sigma", c.appearance_noise_sigma},
          {"speed", c.motion.speed},
          {"direction_change_probability", c.motion.direction_change_probability},
          {"box_jitter_sigma", c.box_jitter_sigma},
          {"object_width", c.object_width},
          {"object_height", c.object_height},
          {"latent_dim", c.latent_dim},
          {"seed", c.seed}};
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  c.frame = {j.at("width").get<int>(), j.at("height").get<int>()};
  c.num_frames = j.at("num_frames").get<long>();
  c.num_confusers = j.at("num_confusers").get<int>();
  c.confuser_similarity = j.at("confuser_similarity").get<double>();
  for (const auto& w : j.at("occlusion_windows")) {
    c.occlusion_windows.push_back({w.at(0).get<long>(), w.at(1).get<long>()});
  }
  c.appearance_noise_sigma = j.at("appearance_noise_sigma").get<double>();
  c.motion.speed = j.at("speed").get<double>();
  c.motion.direction_change_probability = j.at("direction_change_probability").get<double>();
  c.box_jitter_sigma = j.at("box_jitter_sigma").get<double>();
  c.object_width = j.at("object_width").get<double>();
  c.object_height = j.at("object_height").get<double>();
  c.latent_dim = j.at("latent_dim").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void export_scenario(std::ostream& out, const Scenario& scenario) {
  json objects = json::array();
  for (const auto& obj : scenario.objects) {
    json trajectory = json::array();
    for (const auto& b : obj.trajectory) {
      trajectory.push_back({b.cx(), b.cy(), b.width(), b.height()});
    }
    objects.push_back(
        {{"id", obj.id},
         {"latent", std::vector<double>(obj.latent.values().begin(), obj.latent.values().end())},
         {"trajectory", std::move(trajectory)},
         {"visible", obj.visible}});
  }
  const json doc = {{"format", "siamreid-scenario/1"},
                    {"config", config_to_json(scenario.config)},
                    {"objects", std::move(objects)}};
  out << doc.dump(1) << '\n';
}

Scenario import_scenario(std::istream& in) {
  Scenario scenario;
  try {
    const json doc = json::parse(in);
    scenario.config = config_from_json(doc.at("config"));
    scenario.config.validate();
    for (const auto& o : doc.at("objects")) {
      SimObject obj;
      obj.id = o.at("id").get<int>();
      obj.latent = FeatureVector(o.at("latent").get<std::vector<double>>());
      for (const auto& b : o.at("trajectory")) {
        obj.trajectory.push_back(BoundingBox::from_center(
            b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
            b.at(3).get<double>()));
      }
      obj.visible = o.at("visible").get<std::vector<bool>>();
      if (obj.trajectory.size() != static_cast<std::size_t>(scenario.config.num_frames) ||
          obj.visible.size() != obj.trajectory.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "object " + std::to_string(obj.id) + " trajectory length mismatch");
      }
      scenario.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad scenario document: ") + e.what());
  }
  if (scenario.objects.empty() || scenario.objects.front().id != 0) {
    throw Error(ErrorCode::kInvalidArgument, "scenario must list the target (id 0) first");
  }
  scenario.frames = render_frames(scenario.config, scenario.objects);
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open scenario " + path.string());
  return import_scenario(in);
}

}  // namespace siamreid
