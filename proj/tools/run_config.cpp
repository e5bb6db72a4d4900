#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "siamreid/errors.hpp"
#include "siamreid/evaluation.hpp"
#include "siamreid/random.hpp"

namespace siamreid::app {

namespace {

[[noreturn]] void config_error(std::string_view key, const std::string& message) {
  throw Error(ErrorCode::kConfigError, std::string(key) + ": " + message);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    config_error(key, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    config_error(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  config_error(key, "expected true/false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

/// "start-end" pairs separated by commas; "none" or empty for no windows.
std::vector<OcclusionWindow> to_windows(std::string_view key, std::string_view text) {
  text = trim(text);
  std::vector<OcclusionWindow> out;
  if (text.empty() || text == "none") return out;
  for (const auto part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) config_error(key, "expected start-end pairs");
    out.push_back({to_integer<long>(key, part.substr(0, dash)),
                   to_integer<long>(key, part.substr(dash + 1))});
  }
  return out;
}

std::string from_windows(const std::vector<OcclusionWindow>& windows) {
  if (windows.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(windows[i].start) + "-" + std::to_string(windows[i].end);
  }
  return out;
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view key, std::string_view)> set;
};

#define SIAMREID_DOUBLE_FIELD(member)                                            \
  Field {                                                                        \
    [](const RunConfig& c) { return format_number(c.member); },                  \
        [](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_double(k, v); } \
  }

#define SIAMREID_BOOL_FIELD(member)                                              \
  Field {                                                                        \
    [](const RunConfig& c) { return from_bool(c.member); },                      \
        [](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_bool(k, v); } \
  }

#define SIAMREID_INT_FIELD(member, type)                                         \
  Field {                                                                        \
    [](const RunConfig& c) { return std::to_string(c.member); },                 \
        [](RunConfig& c, std::string_view k, std::string_view v) {               \
          c.member = to_integer<type>(k, v);                                     \
        }                                                                        \
  }

#define SIAMREID_STRING_FIELD(member)                                            \
  Field {                                                                        \
    [](const RunConfig& c) { return c.member; },                                 \
        [](RunConfig& c, std::string_view, std::string_view v) { c.member = std::string(trim(v)); } \
  }

// Ordered: this is also the serialization order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> kFields = {
      {"seed", SIAMREID_INT_FIELD(seed, std::uint64_t)},
      {"tracker.score_threshold", SIAMREID_DOUBLE_FIELD(tracker.score_threshold)},
      {"tracker.growth_factor", SIAMREID_DOUBLE_FIELD(tracker.growth_factor)},
      {"tracker.max_scale",
       Field{[](const RunConfig& c) {
               return c.tracker.max_scale ? format_number(*c.tracker.max_scale)
                                          : std::string("auto");
             },
             [](RunConfig& c, std::string_view k, std::string_view v) {
               if (trim(v) == "auto") {
                 c.tracker.max_scale.reset();
               } else {
                 c.tracker.max_scale = to_double(k, v);
               }
             }}},
      {"tracker.hold_last_box", SIAMREID_BOOL_FIELD(tracker.hold_last_box)},
      {"association.epsilon", SIAMREID_DOUBLE_FIELD(tracker.association.epsilon)},
      {"association.accept_threshold_tracking",
       SIAMREID_DOUBLE_FIELD(tracker.association.accept_threshold_tracking)},
      {"association.accept_threshold_lost",
       SIAMREID_DOUBLE_FIELD(tracker.association.accept_threshold_lost)},
      {"association.use_positional_bias",
       SIAMREID_BOOL_FIELD(tracker.association.use_positional_bias)},
      {"association.use_appearance", SIAMREID_BOOL_FIELD(tracker.association.use_appearance)},
      {"dictionary.capacity", SIAMREID_INT_FIELD(tracker.dictionary.capacity, std::size_t)},
      {"dictionary.frame_gap", SIAMREID_INT_FIELD(tracker.dictionary.frame_gap, long)},
      {"dictionary.normalize_before_mean",
       SIAMREID_BOOL_FIELD(tracker.dictionary.normalize_before_mean)},
      {"provider.name", SIAMREID_STRING_FIELD(provider)},
      {"provider.base_score", SIAMREID_DOUBLE_FIELD(oracle_base_score)},
      {"provider.candidates", SIAMREID_STRING_FIELD(candidates_path)},
      {"provider.ncc_scales",
       Field{[](const RunConfig& c) { return join_numbers(c.ncc.scales); },
             [](RunConfig& c, std::string_view k, std::string_view v) {
               c.ncc.scales.clear();
               for (const auto part : split(v, ',')) c.ncc.scales.push_back(to_double(k, part));
             }}},
      {"provider.ncc_floor", SIAMREID_DOUBLE_FIELD(ncc.ncc_floor)},
      {"provider.ncc_max_peaks", SIAMREID_INT_FIELD(ncc.max_peaks, std::size_t)},
      {"provider.ncc_nms_iou", SIAMREID_DOUBLE_FIELD(ncc.nms_iou)},
      {"embedder.name", SIAMREID_STRING_FIELD(embedder)},
      {"embedder.noise_sigma", SIAMREID_DOUBLE_FIELD(embedder_noise_sigma)},
      {"simulator.width", SIAMREID_INT_FIELD(simulator.frame.width, int)},
      {"simulator.height", SIAMREID_INT_FIELD(simulator.frame.height, int)},
      {"simulator.num_frames", SIAMREID_INT_FIELD(simulator.num_frames, long)},
      {"simulator.num_confusers", SIAMREID_INT_FIELD(simulator.num_confusers, int)},
      {"simulator.confuser_similarity", SIAMREID_DOUBLE_FIELD(simulator.confuser_similarity)},
      {"simulator.occlusion",
       Field{[](const RunConfig& c) { return from_windows(c.simulator.occlusion_windows); },
             [](RunConfig& c, std::string_view k, std::string_view v) {
               c.simulator.occlusion_windows = to_windows(k, v);
             }}},
      {"simulator.appearance_noise_sigma",
       SIAMREID_DOUBLE_FIELD(simulator.appearance_noise_sigma)},
      {"simulator.speed", SIAMREID_DOUBLE_FIELD(simulator.motion.speed)},
      {"simulator.direction_change_probability",
       SIAMREID_DOUBLE_FIELD(simulator.motion.direction_change_probability)},
      {"simulator.box_jitter_sigma", SIAMREID_DOUBLE_FIELD(simulator.box_jitter_sigma)},
      {"simulator.object_width", SIAMREID_DOUBLE_FIELD(simulator.object_width)},
      {"simulator.object_height", SIAMREID_DOUBLE_FIELD(simulator.object_height)},
      {"simulator.latent_dim", SIAMREID_INT_FIELD(simulator.latent_dim, int)},
  };
  return kFields;
}

#undef SIAMREID_DOUBLE_FIELD
#undef SIAMREID_BOOL_FIELD
#undef SIAMREID_INT_FIELD
#undef SIAMREID_STRING_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

}  // namespace

ScenarioConfig RunConfig::scenario_config() const {
  ScenarioConfig c = simulator;
  c.seed = seed;
  return c;
}

void validate(const RunConfig& config) {
  try {
    config.tracker.validate();
    config.scenario_config().validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  static const std::set<std::string> kProviders = {"oracle", "external", "ncc"};
  static const std::set<std::string> kEmbedders = {"identity", "histogram", "external"};
  if (!kProviders.count(config.provider)) {
    config_error("provider.name", "unknown provider '" + config.provider + "'");
  }
  if (!kEmbedders.count(config.embedder)) {
    config_error("embedder.name", "unknown embedder '" + config.embedder + "'");
  }
  if (!(config.oracle_base_score >= 0.0 && config.oracle_base_score <= 1.0)) {
    config_error("provider.base_score", "must lie in [0, 1]");
  }
  if (config.ncc.scales.empty() ||
      std::any_of(config.ncc.scales.begin(), config.ncc.scales.end(),
                  [](double s) { return !(s > 0.0); })) {
    config_error("provider.ncc_scales", "needs at least one positive scale");
  }
  if (!(config.ncc.ncc_floor >= -1.0 && config.ncc.ncc_floor <= 1.0)) {
    config_error("provider.ncc_floor", "must lie in [-1, 1]");
  }
  if (config.ncc.max_peaks < 1) config_error("provider.ncc_max_peaks", "must be >= 1");
  if (!(config.ncc.nms_iou >= 0.0 && config.ncc.nms_iou <= 1.0)) {
    config_error("provider.ncc_nms_iou", "must lie in [0, 1]");
  }
  if (!(config.embedder_noise_sigma >= 0.0)) config_error("embedder.noise_sigma", "must be >= 0");
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view = text;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError,
                  "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    const Field* field = find_field(key);
    if (field == nullptr) {
      throw Error(ErrorCode::kConfigError,
                  "line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw Error(ErrorCode::kConfigError,
                  "line " + std::to_string(line) + ": duplicate key '" + std::string(key) + "'");
    }
    field->set(config, key, value);
  }
  validate(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  return parse_run_config(in);
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  const Field* field = find_field(key);
  if (field == nullptr) {
    throw Error(ErrorCode::kConfigError, "unknown key '" + std::string(key) + "'");
  }
  field->set(config, key, value);
  validate(config);
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  const Field* field = find_field(key);
  if (field == nullptr) {
    throw Error(ErrorCode::kConfigError, "unknown key '" + std::string(key) + "'");
  }
  return field->get(config);
}

bool is_config_key(std::string_view key) { return find_field(key) != nullptr; }

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, field] : fields()) keys.push_back(name);
  return keys;
}

std::string serialize(const RunConfig& config) {
  std::string out;
  for (const auto& [name, field] : fields()) {
    out += name;
    out += " = ";
    out += field.get(config);
    out += '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize(config))));
  return buf;
}

}  // namespace siamreid::app
