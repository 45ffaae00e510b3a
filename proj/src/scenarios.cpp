#include "mlrid/scenarios.hpp"

#include <cmath>
#include <random>

#include "mlrid/errors.hpp"

namespace mlrid {

MorphologyVector DamageScenario::morphology(const RobotSpec& spec) const {
  return MorphologyVector::from_counts(spec, present_links);
}

const std::vector<DamageScenario>& damage_scenarios() {
  static const std::vector<DamageScenario> table{
      {"leg3_missed", "Leg 3 missed", {3, 3, 0, 3, 3, 3}, 2},
      {"leg5_missed", "Leg 5 missed", {3, 3, 3, 3, 0, 3}, 2},
      {"legs14_missed", "Legs 1 & 4 missed", {1, 3, 3, 1, 3, 3}, 4},
      {"legs34_missed", "Legs 3 & 4 missed", {3, 3, 0, 0, 3, 3}, 2},
      {"legs34_two_last_links", "Legs 3 & 4 two last links missed", {3, 3, 1, 1, 3, 3}, 2},
      {"legs34_one_last_link", "Legs 3 & 4 one last link missed", {3, 3, 2, 2, 3, 3}, 2},
      {"legs45_missed", "Legs 4 & 5 missed", {3, 3, 3, 0, 0, 3}, 2},
      {"legs23_missed", "Legs 2 & 3 missed", {3, 0, 0, 3, 3, 3}, 2},
  };
  return table;
}

const DamageScenario& find_scenario(const std::string& name) {
  for (const auto& s : damage_scenarios()) {
    if (s.name == name) return s;
  }
  throw ArgumentError("unknown scenario '" + name + "'");
}

OrientationRecord synthesize_experiment(const RobotSpec& spec, const MorphologyVector& truth, const GaitParams& gait,
                                        const ExperimentOptions& options, const SurrogateGains& gains) {
  if (!options.corruption) {
    const auto clean = simulate_orientation(spec, truth, gait, options.duration, static_cast<int>(options.samples),
                                            options.terrain, gains);
    return OrientationRecord::from(clean);
  }
  if (options.oversample < 1) throw ArgumentError("oversample factor must be at least 1");
  const auto fine_samples = static_cast<int>(options.samples) * options.oversample;
  const auto fine = simulate_orientation(spec, truth, gait, options.duration, fine_samples, options.terrain, gains);
  return corrupt_trajectory(fine, *options.corruption);
}

OrientationTrajectory detection_trace(const RobotSpec& spec, const GaitParams& gait,
                                      const DetectionTraceOptions& options, const SurrogateGains& gains) {
  if (!(options.walk_start >= 0.0 && options.walk_start < options.damage_at && options.damage_at < options.duration)) {
    throw ArgumentError("detection trace needs 0 <= walk_start < damage_at < duration");
  }
  const SurrogateModel healthy(spec, MorphologyVector::all_present(spec), gait, std::nullopt, gains);
  const SurrogateModel damaged(spec, MorphologyVector::from_counts(spec, std::vector<int>{3, 3, 0, 0, 3, 3}), gait,
                               std::nullopt, gains);
  const double switch_local = options.damage_at - options.walk_start;
  const double yaw_offset = healthy.yaw_at(switch_local) - damaged.yaw_at(switch_local);

  OrientationTrajectory out;
  out.dt = 1.0 / options.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(options.duration * options.sample_rate));
  out.roll.resize(n);
  out.pitch.resize(n);
  out.yaw.resize(n);
  std::mt19937_64 rng(options.rng_seed);
  std::normal_distribution<double> noise(0.0, options.noise_sigma > 0.0 ? options.noise_sigma : 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = out.time(k);
    Orientation o = healthy.at(0.0);
    if (t >= options.damage_at) {
      o = damaged.at(t - options.walk_start);
      o.yaw += yaw_offset;
    } else if (t >= options.walk_start) {
      o = healthy.at(t - options.walk_start);
    }
    if (options.noise_sigma > 0.0) {
      o.roll += noise(rng);
      o.pitch += noise(rng);
      o.yaw += noise(rng);
    }
    out.roll[k] = o.roll;
    out.pitch[k] = o.pitch;
    out.yaw[k] = o.yaw;
  }
  return out;
}

}  // namespace mlrid
