#include "mlrid/identifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "mlrid/errors.hpp"

namespace mlrid {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Independent engine per GA phase, derived from the run seed.
std::uint64_t phase_seed(std::uint64_t seed, std::uint32_t phase) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), phase};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

enum Phase : std::uint32_t { kInit = 1, kCrossover = 2, kMutation = 3 };

constexpr int kMaxRedraws = 1000;

void require_feasible(const std::vector<Candidate>& pop, const char* stage) {
  for (const auto& c : pop) {
    if (!c.morphology.is_feasible()) {
      throw IntegrityError(std::string("infeasible candidate ") + c.morphology.to_string() + " after " + stage);
    }
  }
}

void check_even(const std::vector<Candidate>& pop) {
  if (pop.size() < 2 || pop.size() % 2 != 0) {
    throw ConfigError("population of " + std::to_string(pop.size()) + " cannot be halved");
  }
}

}  // namespace

void GaConfig::validate(const RobotSpec& spec) const {
  if (pop_size < 4 || pop_size % 2 != 0) throw ConfigError("population size must be even and at least 4");
  if (generations < 0) throw ConfigError("generation count must be non-negative");
  if (!(cr >= 0.0 && cr <= 1.0) || !(mr >= 0.0 && mr <= 1.0)) throw ConfigError("CR and MR must lie in [0, 1]");
  if (p_table.size() != spec.links_per_leg.size()) throw ConfigError("P_ij table needs one row per leg");
  for (std::size_t i = 0; i < p_table.size(); ++i) {
    if (p_table[i].size() != static_cast<std::size_t>(spec.links_per_leg[i])) {
      throw ConfigError("P_ij row " + std::to_string(i + 1) + " does not match the leg's link count");
    }
    for (double p : p_table[i]) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("P_ij entries must lie in [0, 1]");
    }
  }
  if (!(sim_time > 0.0)) throw ConfigError("simulation time must be positive");
  if (samples < 16 || !is_power_of_two(samples)) throw ConfigError("sample count must be a power of two >= 16");
  if (convergence_patience && *convergence_patience < 1) throw ConfigError("convergence patience must be >= 1");
}

GaConfig GaConfig::for_robot(const RobotSpec& spec) {
  for (int n : spec.links_per_leg) {
    if (n != 3) throw ConfigError("default P_ij table only covers three-link legs; supply an explicit table");
  }
  GaConfig cfg;
  cfg.p_table.assign(spec.links_per_leg.size(), {0.9, 0.7, 0.7});
  return cfg;
}

double evaluate_cost(const OrientationTrajectory& sim, const OrientationTrajectory& exp) {
  sim.validate();
  exp.validate();
  if (sim.size() != exp.size()) {
    throw ArgumentError("trajectories hold " + std::to_string(sim.size()) + " and " + std::to_string(exp.size()) +
                        " samples; resample first");
  }
  if (std::abs(sim.dt - exp.dt) > 1e-12 * std::max(sim.dt, exp.dt)) {
    throw ArgumentError("trajectories use different sample spacing; resample first");
  }
  double total = 0.0;
  for (std::size_t q = 0; q < sim.size(); ++q) {
    total += std::abs(sim.roll[q] - exp.roll[q]) + std::abs(sim.pitch[q] - exp.pitch[q]) +
             std::abs(sim.yaw[q] - exp.yaw[q]);
  }
  return total;
}

void rank_population(std::vector<Candidate>& pop) {
  std::ranges::stable_sort(pop, [](const Candidate& a, const Candidate& b) {
    const double ca = a.cost.value_or(kInfinity);
    const double cb = b.cost.value_or(kInfinity);
    if (ca != cb) return ca < cb;
    if (a.cost.has_value() != b.cost.has_value()) return a.cost.has_value();
    return a.morphology < b.morphology;
  });
}

std::vector<Candidate> init_population(const RobotSpec& spec, const GaConfig& cfg) {
  cfg.validate(spec);
  std::vector<Candidate> pop;
  for (auto& m : random_feasible(spec, static_cast<std::size_t>(cfg.pop_size), phase_seed(cfg.rng_seed, kInit))) {
    pop.push_back({std::move(m), std::nullopt});
  }
  return pop;
}

namespace {

MorphologyVector crossover_child(const MorphologyVector& parent, std::span<const Candidate> donors, const GaConfig& cfg,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, donors.size() - 1);
  auto child = parent;
  for (int gene = 0; gene < child.size(); ++gene) {
    if (coin(rng) <= cfg.cr) child.set_bit(gene, donors[pick(rng)].morphology.bit(gene));
  }
  return apply_link_logic(child);
}

MorphologyVector mutate_child(const MorphologyVector& parent, const GaConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto child = parent;
  for (int leg = 0; leg < child.leg_count(); ++leg) {
    if (!(coin(rng) <= cfg.mr)) continue;
    const auto& probs = cfg.p_table.at(static_cast<std::size_t>(leg));
    const int begin = child.leg_offset(leg);
    for (int j = 0; j < static_cast<int>(probs.size()); ++j) {
      child.set_bit(begin + j, coin(rng) <= probs[static_cast<std::size_t>(j)]);
    }
  }
  return apply_link_logic(child);
}

void replace_if_changed(Candidate& slot, MorphologyVector child) {
  if (child != slot.morphology) slot = {std::move(child), std::nullopt};
}

}  // namespace

std::vector<Candidate> crossover_step(std::vector<Candidate> pop, const GaConfig& cfg, std::mt19937_64& rng) {
  check_even(pop);
  const std::size_t half = pop.size() / 2;
  const std::span<const Candidate> donors(pop.data(), half);
  for (std::size_t k = half; k < pop.size(); ++k) {
    replace_if_changed(pop[k], crossover_child(pop[k].morphology, donors, cfg, rng));
  }
  require_feasible(pop, "crossover");
  return pop;
}

std::vector<Candidate> mutation_step(std::vector<Candidate> pop, const GaConfig& cfg, std::mt19937_64& rng) {
  check_even(pop);
  for (std::size_t k = pop.size() / 2; k < pop.size(); ++k) {
    replace_if_changed(pop[k], mutate_child(pop[k].morphology, cfg, rng));
  }
  require_feasible(pop, "mutation");
  return pop;
}

GaRun run_ga(const RobotSpec& spec, const GaConfig& cfg, const CostFunction& cost) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate(spec);
  std::mt19937_64 crossover_rng(phase_seed(cfg.rng_seed, kCrossover));
  std::mt19937_64 mutation_rng(phase_seed(cfg.rng_seed, kMutation));

  GaRun run;
  std::map<MorphologyVector, double> memo;
  auto evaluate = [&](std::vector<Candidate>& pop) {
    for (auto& c : pop) {
      if (c.cost) continue;
      auto it = memo.find(c.morphology);
      if (it == memo.end()) {
        it = memo.emplace(c.morphology, cost(c.morphology)).first;
        ++run.evaluations;
      }
      c.cost = it->second;
    }
    rank_population(pop);
  };

  auto pop = init_population(spec, cfg);
  evaluate(pop);
  run.best_per_generation.push_back({0, pop.front().morphology, *pop.front().cost});

  int stale = 0;
  for (int g = 1; g <= cfg.generations; ++g) {
    const double previous = *pop.front().cost;
    const auto parents = pop;
    pop = crossover_step(std::move(pop), cfg, crossover_rng);
    pop = mutation_step(std::move(pop), cfg, mutation_rng);
    if (cfg.unique_offspring) {
      const std::span<const Candidate> donors(parents.data(), parents.size() / 2);
      for (std::size_t k = donors.size(); k < pop.size(); ++k) {
        auto clashes = [&] {
          return std::any_of(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(k),
                             [&](const Candidate& c) { return c.morphology == pop[k].morphology; });
        };
        for (int attempt = 0; attempt < kMaxRedraws && clashes(); ++attempt) {
          auto child = crossover_child(parents[k].morphology, donors, cfg, crossover_rng);
          pop[k] = {mutate_child(child, cfg, mutation_rng), std::nullopt};
        }
      }
      require_feasible(pop, "redraw");
    }
    evaluate(pop);
    run.best_per_generation.push_back({g, pop.front().morphology, *pop.front().cost});
    stale = *pop.front().cost < previous ? 0 : stale + 1;
    if (cfg.convergence_patience && stale >= *cfg.convergence_patience) break;
  }
  run.final = pop.front();
  run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

CostEvaluator::CostEvaluator(SimulationContext ctx, OrientationTrajectory target)
    : ctx_(std::move(ctx)), target_(std::move(target)) {
  target_.validate();
  if (target_.size() != ctx_.samples) throw ArgumentError("target length does not match the simulation grid");
}

OrientationTrajectory CostEvaluator::simulate_filtered(const MorphologyVector& m) const {
  const auto raw = simulate_orientation(ctx_.spec, m, ctx_.gait, ctx_.sim_time, static_cast<int>(ctx_.samples),
                                        std::nullopt, ctx_.gains);
  return filter_trajectory(raw, ctx_.f_cutoff, ctx_.p_threshold);
}

double CostEvaluator::operator()(const MorphologyVector& m) const {
  try {
    return evaluate_cost(simulate_filtered(m), target_);
  } catch (const SimulationError&) {
    return kInfinity;
  }
}

OrientationTrajectory uniform_view(const OrientationRecord& record) {
  record.validate();
  if (record.size() < 3) throw ArgumentError("record too short");
  const std::size_t n = record.size() - 1;
  const double span = record.time.back() - record.time.front();
  OrientationTrajectory out;
  out.t0 = record.time.front();
  out.dt = span / static_cast<double>(n);
  out.roll = interpolate_uniform(record.time, record.roll, out.t0, span, n);
  out.pitch = interpolate_uniform(record.time, record.pitch, out.t0, span, n);
  out.yaw = interpolate_uniform(record.time, record.yaw, out.t0, span, n);
  return out;
}

ProcessedExperiment preprocess_experiment(const OrientationRecord& record, const SimulationContext& ctx,
                                          const DetectorConfig& det) {
  const auto view = uniform_view(record);
  ProcessedExperiment out;
  out.detection = detect(view, det);
  const auto onset = refine_motion_onset(view, out.detection, det);
  if (!onset) throw PipelineError("no locomotion found in the record");
  out.motion_start = *onset;
  if (out.motion_start + ctx.sim_time > record.time.back() + 1e-9) {
    throw PipelineError("record ends " + std::to_string(record.time.back() - out.motion_start) +
                        " s after motion start; " + std::to_string(ctx.sim_time) + " s needed");
  }
  out.window = resample_record(record, out.motion_start, ctx.sim_time, ctx.samples);
  out.filtered = filter_trajectory(out.window, ctx.f_cutoff, ctx.p_threshold);
  return out;
}

GaRun run_identification(const OrientationRecord& exp_raw, const RobotSpec& spec, const GaitParams& gait,
                         const GaConfig& ga, const FilterConfig& flt, const DetectorConfig& det,
                         const SurrogateGains& gains) {
  ga.validate(spec);
  flt.validate();
  SimulationContext ctx{spec, gait, gains, flt.f_cutoff, flt.p_threshold, ga.sim_time, ga.samples};
  auto processed = preprocess_experiment(exp_raw, ctx, det);
  const CostEvaluator evaluator(ctx, processed.filtered);
  auto run = run_ga(spec, ga, std::cref(evaluator));
  run.motion_start = processed.motion_start;
  return run;
}

std::vector<int> damaged_legs(const MorphologyVector& m) {
  std::vector<int> out;
  for (int i = 0; i < m.leg_count(); ++i) {
    if (m.leg_damaged(i)) out.push_back(i + 1);
  }
  return out;
}

bool same_damaged_legs(const MorphologyVector& found, const MorphologyVector& truth, int link_tolerance) {
  if (found.leg_count() != truth.leg_count()) throw ArgumentError("morphologies describe different robots");
  for (int i = 0; i < truth.leg_count(); ++i) {
    if (found.leg_damaged(i) != truth.leg_damaged(i)) return false;
    if (truth.leg_damaged(i) && std::abs(found.present_links(i) - truth.present_links(i)) > link_tolerance) {
      return false;
    }
  }
  return true;
}

OracleResult exhaustive_oracle(const CostEvaluator& evaluator, std::uint64_t raw_state_cap) {
  const auto all = enumerate_feasible(evaluator.context().spec, raw_state_cap);
  OracleResult result;
  result.table.resize(all.size());

  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  auto work = [&](std::size_t first) {
    for (std::size_t k = first; k < all.size(); k += workers) result.table[k] = {all[k], evaluator(all[k])};
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  result.cost = kInfinity;
  result.best = all.front();
  for (const auto& entry : result.table) {
    if (entry.cost < result.cost) {
      result.cost = entry.cost;
      result.best = entry.morphology;
    }
  }
  return result;
}

OracleResult exhaustive_oracle(const OrientationTrajectory& exp_processed, const RobotSpec& spec,
                               const GaitParams& gait, const FilterConfig& flt, double sim_time, std::size_t samples,
                               const SurrogateGains& gains) {
  flt.validate();
  SimulationContext ctx{spec, gait, gains, flt.f_cutoff, flt.p_threshold, sim_time, samples};
  return exhaustive_oracle(CostEvaluator(std::move(ctx), exp_processed));
}

}  // namespace mlrid
