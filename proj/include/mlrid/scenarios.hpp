#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlrid/morphology.hpp"
#include "mlrid/signal.hpp"
#include "mlrid/surrogate.hpp"
#include "mlrid/trajectory.hpp"

namespace mlrid {

/// One named damage case from the reference experiment table.
struct DamageScenario {
  std::string name;   // identifier used on the command line, e.g. "legs14_missed"
  std::string label;  // human-readable, e.g. "Legs 1 & 4 missed"
  std::vector<int> present_links;  // per leg
  int experiment_runs = 0;         // runs allotted in the 18-run corrupted suite

  MorphologyVector morphology(const RobotSpec& spec) const;
};

/// The eight reference scenarios for the default hexapod.
const std::vector<DamageScenario>& damage_scenarios();

/// Throws ArgumentError for unknown names.
const DamageScenario& find_scenario(const std::string& name);

struct ExperimentOptions {
  double duration = 7.5;              // s of walking, starting at t = 0
  std::size_t samples = 1536;         // at 5/1024 s spacing for the default duration
  std::optional<CorruptionConfig> corruption;
  std::optional<TerrainBias> terrain;
  /// Oversampling of the clean simulation that corruption re-times; jitter
  /// interpolates between these samples.
  int oversample = 4;
};

/// Surrogate "experimental" record for a morphology. Without corruption the
/// record is the simulation itself.
OrientationRecord synthesize_experiment(const RobotSpec& spec, const MorphologyVector& truth, const GaitParams& gait,
                                        const ExperimentOptions& options, const SurrogateGains& gains = {});

/// Trace in the style of the detector demonstration: stationary with sensor
/// noise until `walk_start`, healthy walking until `damage_at`, then walking
/// with legs 3 and 4 lost. Yaw stays continuous across the switch.
struct DetectionTraceOptions {
  double duration = 32.0;
  double sample_rate = 200.0;
  double walk_start = 6.0;
  double damage_at = 19.0;
  double noise_sigma = deg_to_rad(0.05);
  std::uint64_t rng_seed = 4;
};

OrientationTrajectory detection_trace(const RobotSpec& spec, const GaitParams& gait,
                                      const DetectionTraceOptions& options = {}, const SurrogateGains& gains = {});

}  // namespace mlrid
