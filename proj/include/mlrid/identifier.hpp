#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mlrid/detector.hpp"
#include "mlrid/morphology.hpp"
#include "mlrid/signal.hpp"
#include "mlrid/surrogate.hpp"
#include "mlrid/trajectory.hpp"

namespace mlrid {

/// Genetic-algorithm settings. Defaults are the reference identification
/// parameters; `p_table[i][j]` is the chance a mutated leg i keeps link j.
struct GaConfig {
  int pop_size = 10;
  int generations = 20;
  double cr = 0.9;
  double mr = 0.33;
  std::vector<std::vector<double>> p_table;
  double sim_time = 5.0;
  std::size_t samples = 1024;
  std::uint64_t rng_seed = 0;
  std::optional<int> convergence_patience;
  /// Redraw offspring that duplicate a member of the current population.
  bool unique_offspring = true;

  void validate(const RobotSpec& spec) const;

  /// Defaults with P_i1 = 0.9, P_i2 = P_i3 = 0.7. Throws ConfigError for
  /// robots whose legs do not all have three links; those need an explicit table.
  static GaConfig for_robot(const RobotSpec& spec);
};

struct Candidate {
  MorphologyVector morphology;
  std::optional<double> cost;
};

struct GenerationBest {
  int generation = 0;
  MorphologyVector morphology;
  double cost = 0.0;
};

struct GaRun {
  std::vector<GenerationBest> best_per_generation;
  Candidate final;
  int evaluations = 0;
  double wall_time = 0.0;
  std::optional<double> motion_start;
};

/// Everything needed to turn a morphology into a filtered trajectory.
struct SimulationContext {
  RobotSpec spec = RobotSpec::hexapod();
  GaitParams gait;
  SurrogateGains gains;
  double f_cutoff = 10.0;
  double p_threshold = 0.1;
  double sim_time = 5.0;
  std::size_t samples = 1024;
};

/// Sum over samples of the absolute roll, pitch and yaw differences.
/// Throws ArgumentError unless both trajectories share length and spacing.
double evaluate_cost(const OrientationTrajectory& sim, const OrientationTrajectory& exp);

/// Candidates sorted by ascending cost (unevaluated last), ties broken by morphology.
void rank_population(std::vector<Candidate>& pop);

std::vector<Candidate> init_population(const RobotSpec& spec, const GaConfig& cfg);

/// Second-half candidates copy each gene, with probability CR, from a
/// freshly drawn first-half donor; link logic repairs the result.
std::vector<Candidate> crossover_step(std::vector<Candidate> pop, const GaConfig& cfg, std::mt19937_64& rng);

/// Each leg of a second-half candidate is, with probability MR, redrawn
/// link by link (present with probability P_ij) and repaired.
std::vector<Candidate> mutation_step(std::vector<Candidate> pop, const GaConfig& cfg, std::mt19937_64& rng);

using CostFunction = std::function<double(const MorphologyVector&)>;

/// Elitist GA loop over any cost. Costs are memoised per morphology, so
/// `evaluations` counts distinct morphologies scored.
GaRun run_ga(const RobotSpec& spec, const GaConfig& cfg, const CostFunction& cost);

/// Simulates, filters and scores candidates against a processed target.
class CostEvaluator {
 public:
  CostEvaluator(SimulationContext ctx, OrientationTrajectory target);

  /// +infinity for statically unsupportable morphologies.
  double operator()(const MorphologyVector& m) const;
  OrientationTrajectory simulate_filtered(const MorphologyVector& m) const;

  const SimulationContext& context() const { return ctx_; }
  const OrientationTrajectory& target() const { return target_; }

 private:
  SimulationContext ctx_;
  OrientationTrajectory target_;
};

struct ProcessedExperiment {
  OrientationTrajectory filtered;
  OrientationTrajectory window;  // cropped and resampled, before filtering
  double motion_start = 0.0;
  DetectionReport detection;
};

/// Uniform view of a record at its mean sample spacing (last sample dropped).
OrientationTrajectory uniform_view(const OrientationRecord& record);

/// Detects motion, crops sim_time seconds from the refined onset, resamples
/// onto the canonical grid and filters. Throws PipelineError when no
/// locomotion is found or the record is too short.
ProcessedExperiment preprocess_experiment(const OrientationRecord& record, const SimulationContext& ctx,
                                          const DetectorConfig& det);

/// Full identification: preprocess, then GA against the surrogate.
GaRun run_identification(const OrientationRecord& exp_raw, const RobotSpec& spec, const GaitParams& gait,
                         const GaConfig& ga, const FilterConfig& flt, const DetectorConfig& det,
                         const SurrogateGains& gains = {});

/// 1-based numbers of legs that lost at least one link.
std::vector<int> damaged_legs(const MorphologyVector& m);

/// Leg-level agreement: the same legs are damaged, and on each damaged leg
/// the present-link counts differ by at most `link_tolerance`.
bool same_damaged_legs(const MorphologyVector& found, const MorphologyVector& truth, int link_tolerance = 1);

struct OracleEntry {
  MorphologyVector morphology;
  double cost = 0.0;
};

struct OracleResult {
  MorphologyVector best;
  double cost = 0.0;
  std::vector<OracleEntry> table;  // lexicographic morphology order
};

/// Brute-force minimum over every feasible morphology; ties go to the
/// lexicographically smallest vector.
OracleResult exhaustive_oracle(const CostEvaluator& evaluator, std::uint64_t raw_state_cap = kDefaultEnumerationCap);

OracleResult exhaustive_oracle(const OrientationTrajectory& exp_processed, const RobotSpec& spec,
                               const GaitParams& gait, const FilterConfig& flt, double sim_time = 5.0,
                               std::size_t samples = 1024, const SurrogateGains& gains = {});

}  // namespace mlrid
