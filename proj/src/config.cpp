#include "mlrid/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mlrid/errors.hpp"
#include "mlrid/scenarios.hpp"

namespace mlrid {
namespace {

using nlohmann::json;

// Reads optional keys of one object and rejects any it was not asked about.
class Block {
 public:
  Block(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  void get_deg(const char* key, double& radians) {
    double deg = rad_to_deg(radians);
    get(key, deg);
    radians = deg_to_rad(deg);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const char* key) const { return j_.at(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key " + where_ + "." + key);
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

RobotSpec robot_from(const json& j) {
  RobotSpec r = RobotSpec::hexapod();
  Block b(j, "robot");
  b.get("links_per_leg", r.links_per_leg);
  b.get("link_lengths", r.link_lengths);
  b.get("link_masses", r.link_masses);
  b.get("body_mass", r.body_mass);
  if (b.has("mount_angles_deg")) {
    std::vector<double> deg;
    b.get("mount_angles_deg", deg);
    r.mount_angles.clear();
    for (double d : deg) r.mount_angles.push_back(deg_to_rad(d));
  }
  b.get("mount_radius", r.mount_radius);
  b.finish();
  return r;
}

json robot_to(const RobotSpec& r) {
  std::vector<double> deg;
  for (double a : r.mount_angles) deg.push_back(rad_to_deg(a));
  return {{"links_per_leg", r.links_per_leg}, {"link_lengths", r.link_lengths}, {"link_masses", r.link_masses},
          {"body_mass", r.body_mass},         {"mount_angles_deg", deg},        {"mount_radius", r.mount_radius}};
}

}  // namespace

void PipelineConfig::validate() const {
  try {
    robot.validate();
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("robot: ") + e.what());
  }
  gait.validate(robot);
  surrogate.validate();
  ga.validate(robot);
  filter.validate();
  detector.validate();
  if (corruption) corruption->validate();
  if (experiment.scenario) {
    try {
      (void)find_scenario(*experiment.scenario);
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("experiment: ") + e.what());
    }
  }
  if (experiment.truth) {
    try {
      (void)apply_link_logic(MorphologyVector::parse(*experiment.truth), robot);
    } catch (const Error& e) {
      throw ConfigError(std::string("experiment.truth: ") + e.what());
    }
  }
  if (!(experiment.duration > 0.0) || experiment.samples < 16) {
    throw ConfigError("experiment needs a positive duration and at least 16 samples");
  }
}

void PipelineConfig::set_seed(std::uint64_t value) {
  seed = value;
  ga.rng_seed = value;
  if (corruption) corruption->rng_seed = value;
}

SimulationContext PipelineConfig::simulation_context() const {
  return {robot, gait, surrogate, filter.f_cutoff, filter.p_threshold, ga.sim_time, ga.samples};
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  Block top(j, "config");
  if (top.has("robot")) cfg.robot = robot_from(top.at("robot"));
  try {
    cfg.ga = GaConfig::for_robot(cfg.robot);
  } catch (const ConfigError&) {
    cfg.ga = GaConfig{};
  }

  if (top.has("gait")) {
    Block b(top.at("gait"), "gait");
    b.get("period", cfg.gait.period);
    b.get("step_height", cfg.gait.step_height);
    b.get("stride", cfg.gait.stride);
    b.get("duty", cfg.gait.duty);
    b.get("body_height", cfg.gait.body_height);
    b.get("foot_spread", cfg.gait.foot_spread);
    b.get("group_a", cfg.gait.group_a);
    b.get("group_b", cfg.gait.group_b);
    b.finish();
  }
  if (top.has("surrogate")) {
    Block b(top.at("surrogate"), "surrogate");
    b.get("leg_stiffness", cfg.surrogate.leg_stiffness);
    b.get("deficit_gain", cfg.surrogate.deficit_gain);
    b.get_deg("max_tilt_deg", cfg.surrogate.max_tilt);
    b.get("yaw_gain", cfg.surrogate.yaw_gain);
    b.get("transition", cfg.surrogate.transition);
    b.get("gravity", cfg.surrogate.gravity);
    b.finish();
  }
  if (top.has("ga")) {
    Block b(top.at("ga"), "ga");
    b.get("pop_size", cfg.ga.pop_size);
    b.get("generations", cfg.ga.generations);
    b.get("cr", cfg.ga.cr);
    b.get("mr", cfg.ga.mr);
    b.get("p_table", cfg.ga.p_table);
    b.get("sim_time", cfg.ga.sim_time);
    b.get("samples", cfg.ga.samples);
    if (b.has("convergence_patience")) {
      int patience = 0;
      b.get("convergence_patience", patience);
      cfg.ga.convergence_patience = patience;
    }
    b.get("unique_offspring", cfg.ga.unique_offspring);
    b.finish();
  }
  if (top.has("filter")) {
    Block b(top.at("filter"), "filter");
    b.get("fc_hz", cfg.filter.f_cutoff);
    b.get("pc", cfg.filter.p_threshold);
    b.finish();
  }
  if (top.has("detector")) {
    Block b(top.at("detector"), "detector");
    b.get("window", cfg.detector.window);
    b.get("step", cfg.detector.step);
    b.get_deg("fluct_threshold_deg", cfg.detector.fluct_threshold);
    b.get("persistence", cfg.detector.persistence);
    b.get_deg("motion_floor_deg", cfg.detector.motion_floor);
    b.finish();
  }
  if (top.has("corruption")) {
    CorruptionConfig c;
    Block b(top.at("corruption"), "corruption");
    b.get_deg("noise_sigma_deg", c.noise_sigma);
    b.get_deg("drift_rate_deg_s", c.drift_rate);
    b.get("delay", c.delay);
    if (b.has("jitter_hz")) {
      std::array<double, 2> rates{};
      b.get("jitter_hz", rates);
      c.jitter = SampleJitter{rates[0], rates[1]};
    }
    b.finish();
    cfg.corruption = c;
  }
  if (top.has("terrain")) {
    TerrainBias t;
    Block b(top.at("terrain"), "terrain");
    b.get_deg("slope_deg", t.slope);
    b.get_deg("heading_deg", t.heading);
    b.finish();
    cfg.terrain = t;
  }
  if (top.has("experiment")) {
    Block b(top.at("experiment"), "experiment");
    auto text = [&](const char* key, auto& slot) {
      if (!b.has(key)) return;
      std::string value;
      b.get(key, value);
      slot = value;
    };
    text("scenario", cfg.experiment.scenario);
    text("truth", cfg.experiment.truth);
    b.get("duration", cfg.experiment.duration);
    b.get("samples", cfg.experiment.samples);
    text("input", cfg.experiment.input);
    b.finish();
  }
  std::uint64_t seed = 0;
  top.get("seed", seed);
  top.finish();
  cfg.set_seed(seed);
  cfg.validate();
  return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["robot"] = robot_to(cfg.robot);
  j["gait"] = {{"period", cfg.gait.period}, {"step_height", cfg.gait.step_height}, {"stride", cfg.gait.stride},
               {"duty", cfg.gait.duty},     {"body_height", cfg.gait.body_height}, {"foot_spread", cfg.gait.foot_spread},
               {"group_a", cfg.gait.group_a}, {"group_b", cfg.gait.group_b}};
  j["surrogate"] = {{"leg_stiffness", cfg.surrogate.leg_stiffness},
                    {"deficit_gain", cfg.surrogate.deficit_gain},
                    {"max_tilt_deg", rad_to_deg(cfg.surrogate.max_tilt)},
                    {"yaw_gain", cfg.surrogate.yaw_gain},
                    {"transition", cfg.surrogate.transition},
                    {"gravity", cfg.surrogate.gravity}};
  j["ga"] = {{"pop_size", cfg.ga.pop_size},
             {"generations", cfg.ga.generations},
             {"cr", cfg.ga.cr},
             {"mr", cfg.ga.mr},
             {"p_table", cfg.ga.p_table},
             {"sim_time", cfg.ga.sim_time},
             {"samples", cfg.ga.samples},
             {"convergence_patience", cfg.ga.convergence_patience ? json(*cfg.ga.convergence_patience) : json()},
             {"unique_offspring", cfg.ga.unique_offspring}};
  j["filter"] = {{"fc_hz", cfg.filter.f_cutoff}, {"pc", cfg.filter.p_threshold}};
  j["detector"] = {{"window", cfg.detector.window},
                   {"step", cfg.detector.step},
                   {"fluct_threshold_deg", rad_to_deg(cfg.detector.fluct_threshold)},
                   {"persistence", cfg.detector.persistence},
                   {"motion_floor_deg", rad_to_deg(cfg.detector.motion_floor)}};
  if (cfg.corruption) {
    const auto& c = *cfg.corruption;
    j["corruption"] = {{"noise_sigma_deg", rad_to_deg(c.noise_sigma)},
                       {"drift_rate_deg_s", rad_to_deg(c.drift_rate)},
                       {"delay", c.delay},
                       {"jitter_hz", c.jitter ? json::array({c.jitter->rate_low, c.jitter->rate_high}) : json()}};
  } else {
    j["corruption"] = nullptr;
  }
  j["terrain"] = cfg.terrain ? json{{"slope_deg", rad_to_deg(cfg.terrain->slope)},
                                    {"heading_deg", rad_to_deg(cfg.terrain->heading)}}
                             : json();
  const auto& e = cfg.experiment;
  j["experiment"] = {{"scenario", e.scenario ? json(*e.scenario) : json()},
                     {"truth", e.truth ? json(*e.truth) : json()},
                     {"duration", e.duration},
                     {"samples", e.samples},
                     {"input", e.input ? json(e.input->string()) : json()}};
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  auto cfg = config_from_json(j);
  if (cfg.experiment.input && cfg.experiment.input->is_relative()) {
    cfg.experiment.input = path.parent_path() / *cfg.experiment.input;
  }
  return cfg;
}

void save_config(const PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
}

std::string config_hash(const PipelineConfig& cfg) {
  const auto text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mlrid
