#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mlrid/detector.hpp"
#include "mlrid/identifier.hpp"
#include "mlrid/morphology.hpp"
#include "mlrid/signal.hpp"
#include "mlrid/surrogate.hpp"

namespace mlrid {

/// Where the "experimental" record comes from when no input file is given.
struct ExperimentSource {
  std::optional<std::string> scenario;   // named damage scenario
  std::optional<std::string> truth;      // morphology literal; overrides the scenario's
  double duration = 7.5;                 // s
  std::size_t samples = 1536;
  std::optional<std::filesystem::path> input;  // trajectory CSV
};

/// Complete description of one run. Angles are degrees in the file and
/// radians here.
struct PipelineConfig {
  RobotSpec robot = RobotSpec::hexapod();
  GaitParams gait;
  SurrogateGains surrogate;
  GaConfig ga = GaConfig::for_robot(RobotSpec::hexapod());
  FilterConfig filter;
  DetectorConfig detector;
  std::optional<CorruptionConfig> corruption;
  std::optional<TerrainBias> terrain;
  ExperimentSource experiment;
  std::uint64_t seed = 0;

  /// Throws ConfigError when any nested block is invalid.
  void validate() const;

  /// Applies `seed` to the GA and corruption streams.
  void set_seed(std::uint64_t value);

  SimulationContext simulation_context() const;
};

/// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PipelineConfig& cfg);

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& cfg, const std::filesystem::path& path);

/// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace mlrid
