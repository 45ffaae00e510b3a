#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "mlrid/config.hpp"
#include "mlrid/detector.hpp"
#include "mlrid/errors.hpp"
#include "mlrid/identifier.hpp"
#include "mlrid/scenarios.hpp"
#include "mlrid/signal.hpp"
#include "mlrid/surrogate.hpp"
#include "mlrid/trajectory_io.hpp"

namespace mlrid::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string input;
};

struct Options {
  Common common;
  std::string morphology;
  std::optional<double> duration;
  std::optional<std::size_t> samples;
  std::optional<double> start;
  std::string series;
  std::string scenario;
  bool corrupt = false;
  std::optional<int> runs;
};

PipelineConfig resolve_config(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_config(c.config);
  if (c.seed) cfg.set_seed(*c.seed);
  return cfg;
}

fs::path output_dir(const Common& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ResourceError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot write " + path.string());
  f << text;
}

std::string header(const PipelineConfig& cfg, const std::string& command) {
  std::ostringstream s;
  s << "command: " << command << "\nconfig_hash: " << config_hash(cfg) << "\nseed: " << cfg.seed << '\n';
  return s.str();
}

MorphologyVector truth_of(const PipelineConfig& cfg) {
  if (cfg.experiment.truth) return apply_link_logic(MorphologyVector::parse(*cfg.experiment.truth), cfg.robot);
  if (cfg.experiment.scenario) return find_scenario(*cfg.experiment.scenario).morphology(cfg.robot);
  throw ConfigError("no experiment source: pass --input or set experiment.scenario or experiment.truth");
}

OrientationRecord experiment_record(const PipelineConfig& cfg, const Common& c) {
  if (!c.input.empty()) return load_trajectory(c.input);
  if (cfg.experiment.input) return load_trajectory(*cfg.experiment.input);
  ExperimentOptions opt;
  opt.duration = cfg.experiment.duration;
  opt.samples = cfg.experiment.samples;
  opt.corruption = cfg.corruption;
  opt.terrain = cfg.terrain;
  return synthesize_experiment(cfg.robot, truth_of(cfg), cfg.gait, opt, cfg.surrogate);
}

MorphologyVector chosen_morphology(const PipelineConfig& cfg, const std::string& literal) {
  if (literal.empty()) return truth_of(cfg);
  const auto m = MorphologyVector::parse(literal);
  if (apply_link_logic(m, cfg.robot) != m) {
    throw ArgumentError("morphology " + literal + " violates link logic");
  }
  return m;
}

std::string legs_text(const std::vector<int>& legs) {
  if (legs.empty()) return "none";
  std::string s;
  for (int leg : legs) s += (s.empty() ? "" : ",") + std::to_string(leg);
  return s;
}

std::string run_report(const GaRun& run) {
  std::ostringstream s;
  s << "morphology: " << run.final.morphology.to_string() << '\n'
    << "cost: " << fmt(run.final.cost.value_or(0.0), 10) << '\n'
    << "damaged_legs: " << legs_text(damaged_legs(run.final.morphology)) << '\n'
    << "evaluations: " << run.evaluations << '\n'
    << "generations: " << run.best_per_generation.size() - 1 << '\n'
    << "motion_start_s: " << (run.motion_start ? fmt(*run.motion_start, 9) : "none") << '\n'
    << "wall_time_s: " << fmt(run.wall_time, 4) << '\n';
  return s.str();
}

void write_generations(const fs::path& path, const GaRun& run) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot write " + path.string());
  f << "generation,best_cost,best_morphology\n";
  for (const auto& g : run.best_per_generation) {
    f << g.generation << ',' << fmt(g.cost, 12) << ',' << g.morphology.to_string() << '\n';
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  MorphologyVector m = chosen_morphology(cfg, o.morphology);
  const double duration = o.duration.value_or(cfg.experiment.duration);
  const auto samples = o.samples.value_or(cfg.experiment.samples);
  const auto traj = simulate_orientation(cfg.robot, m, cfg.gait, duration, static_cast<int>(samples), cfg.terrain,
                                         cfg.surrogate);
  const auto path = output_dir(o.common) / "simulated.csv";
  save_trajectory(OrientationRecord::from(traj), path);
  out << header(cfg, "simulate") << "morphology: " << m.to_string() << "\nsamples: " << traj.size()
      << "\nwrote: " << path.string() << '\n';
  return kExitOk;
}

int cmd_corrupt(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  if (o.common.input.empty()) throw ArgumentError("corrupt needs --input");
  const auto record = load_trajectory(o.common.input);
  auto corruption = cfg.corruption.value_or(CorruptionConfig::bench(cfg.seed));
  corruption.rng_seed = cfg.seed;
  const auto corrupted = corrupt_trajectory(uniform_view(record), corruption);
  const auto path = output_dir(o.common) / "corrupted.csv";
  save_trajectory(corrupted, path);
  out << header(cfg, "corrupt") << "samples: " << corrupted.size() << "\nwrote: " << path.string() << '\n';
  return kExitOk;
}

int cmd_filter(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  if (o.common.input.empty()) throw ArgumentError("filter needs --input");
  const auto record = load_trajectory(o.common.input);
  record.validate();
  if (record.size() < 2) throw ArgumentError("record too short to filter");
  const double start = o.start.value_or(record.time.front());
  const auto window = resample_record(record, start, cfg.ga.sim_time, cfg.ga.samples);
  const auto filtered = filter_trajectory(window, cfg.filter.f_cutoff, cfg.filter.p_threshold);
  const auto dir = output_dir(o.common);
  save_trajectory(OrientationRecord::from(filtered), dir / "filtered.csv");

  const double bin = window.sample_rate() / static_cast<double>(window.size());
  const std::pair<const char*, std::pair<const std::vector<double>*, const std::vector<double>*>> channels[] = {
      {"roll", {&window.roll, &filtered.roll}},
      {"pitch", {&window.pitch, &filtered.pitch}},
      {"yaw", {&window.yaw, &filtered.yaw}}};
  for (const auto& [name, pair] : channels) {
    auto to_deg = [](std::vector<double> ps) {
      for (auto& v : ps) v = rad_to_deg(v);
      return ps;
    };
    save_spectrum_table(to_deg(power_spectrum(dft_forward(*pair.first, window.sample_rate()))), bin,
                        dir / (std::string("ps_") + name + "_original.csv"));
    save_spectrum_table(to_deg(power_spectrum(dft_forward(*pair.second, window.sample_rate()))), bin,
                        dir / (std::string("ps_") + name + "_filtered.csv"));
  }
  out << header(cfg, "filter") << "window_start_s: " << fmt(start, 9) << "\nsamples: " << window.size()
      << "\nwrote: " << (dir / "filtered.csv").string() << '\n';
  return kExitOk;
}

int cmd_detect(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  const auto record = experiment_record(cfg, o.common);
  const auto view = uniform_view(record);
  const auto report = detect(view, cfg.detector);
  std::ostringstream s;
  s << header(cfg, "detect") << "damaged: " << (report.damaged ? "true" : "false") << '\n'
    << "damage_time_s: " << (report.damage_time ? fmt(*report.damage_time, 9) : "none") << '\n'
    << "motion_start_s: " << (report.motion_start ? fmt(*report.motion_start, 9) : "none") << '\n'
    << "max_fluctuation_deg: " << fmt(rad_to_deg(report.max_fluctuation)) << '\n';
  const auto dir = output_dir(o.common);
  write_text(dir / "detection.txt", s.str());
  if (!o.series.empty()) {
    std::ofstream f(o.series);
    if (!f) throw ResourceError("cannot write " + o.series);
    f << "time_s,roll_deg,pitch_deg,yaw_deg\n";
    for (const auto& w : report.fluctuation_series) {
      f << fmt(w.time, 12) << ',' << fmt(rad_to_deg(w.roll), 12) << ',' << fmt(rad_to_deg(w.pitch), 12) << ','
        << fmt(rad_to_deg(w.yaw), 12) << '\n';
    }
  }
  out << s.str();
  return kExitOk;
}

int cmd_identify(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  const auto record = experiment_record(cfg, o.common);
  const auto run = run_identification(record, cfg.robot, cfg.gait, cfg.ga, cfg.filter, cfg.detector, cfg.surrogate);
  const auto dir = output_dir(o.common);
  const auto text = header(cfg, "identify") + run_report(run);
  write_text(dir / "identify_report.txt", text);
  write_generations(dir / "generations.csv", run);
  out << text;
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  const auto record = experiment_record(cfg, o.common);
  const auto ctx = cfg.simulation_context();
  const auto processed = preprocess_experiment(record, ctx, cfg.detector);
  const auto result = exhaustive_oracle(CostEvaluator(ctx, processed.filtered));
  const auto dir = output_dir(o.common);
  std::ofstream f(dir / "oracle_table.csv");
  if (!f) throw ResourceError("cannot write " + (dir / "oracle_table.csv").string());
  f << "morphology,cost\n";
  for (const auto& e : result.table) f << e.morphology.to_string() << ',' << fmt(e.cost, 12) << '\n';
  out << header(cfg, "oracle") << "rows: " << result.table.size() << "\nmorphology: " << result.best.to_string()
      << "\ncost: " << fmt(result.cost, 10) << "\nwrote: " << (dir / "oracle_table.csv").string() << '\n';
  return kExitOk;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.common);
  const std::string name = !o.scenario.empty() ? o.scenario : cfg.experiment.scenario.value_or("");
  if (name.empty()) throw ArgumentError("scenario needs --name or experiment.scenario in the config");
  const auto& sc = find_scenario(name);
  if (o.corrupt && !cfg.corruption) cfg.corruption = CorruptionConfig::bench(cfg.seed);
  const int runs = o.runs.value_or(cfg.corruption ? sc.experiment_runs : 1);
  if (runs < 1) throw ArgumentError("--runs must be at least 1");
  const auto truth = sc.morphology(cfg.robot);

  std::ostringstream s;
  s << header(cfg, "scenario") << "scenario: " << sc.label << "\ntruth: " << truth.to_string()
    << "\ncorrupted: " << (cfg.corruption ? "true" : "false") << '\n';
  int exact = 0;
  int leg_level = 0;
  double total_time = 0.0;
  const auto base_seed = cfg.seed;
  for (int r = 0; r < runs; ++r) {
    cfg.set_seed(base_seed + static_cast<std::uint64_t>(r));
    ExperimentOptions opt;
    opt.duration = cfg.experiment.duration;
    opt.samples = cfg.experiment.samples;
    opt.corruption = cfg.corruption;
    opt.terrain = cfg.terrain;
    const auto record = synthesize_experiment(cfg.robot, truth, cfg.gait, opt, cfg.surrogate);
    const auto run =
        run_identification(record, cfg.robot, cfg.gait, cfg.ga, cfg.filter, cfg.detector, cfg.surrogate);
    const bool hit = run.final.morphology == truth;
    const bool leg_hit = same_damaged_legs(run.final.morphology, truth);
    exact += hit ? 1 : 0;
    leg_level += leg_hit ? 1 : 0;
    total_time += run.wall_time;
    s << "run " << r + 1 << ": seed " << cfg.seed << " found " << run.final.morphology.to_string() << " cost "
      << fmt(run.final.cost.value_or(0.0), 8) << " damaged_legs " << legs_text(damaged_legs(run.final.morphology))
      << (leg_hit ? " leg-level ok" : " leg-level miss") << (hit ? ", exact" : "") << '\n';
  }
  s << "summary: runs " << runs << ", leg-level correct " << leg_level << ", exact " << exact
    << ", mean wall time " << fmt(total_time / runs, 4) << " s\n";
  const auto dir = output_dir(o.common);
  write_text(dir / (sc.name + "_report.txt"), s.str());
  out << s.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Damage identification for multi-legged robots from body orientation", "mlrid"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.common.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.common.seed, "seed for the GA and corruption streams");
    sub->add_option("--out", o.common.out_dir, "output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "write a surrogate trajectory for a morphology");
  add_common(simulate);
  simulate->add_option("--morphology", o.morphology, "bracketed literal, e.g. [111][100][111][111][111][111]");
  simulate->add_option("--duration", o.duration, "seconds");
  simulate->add_option("--samples", o.samples, "sample count");

  auto* corrupt = app.add_subcommand("corrupt", "apply noise, drift, delay and sampling jitter");
  add_common(corrupt);
  corrupt->add_option("--input", o.common.input, "trajectory CSV")->check(CLI::ExistingFile);

  auto* filter = app.add_subcommand("filter", "resample, filter and emit power spectra");
  add_common(filter);
  filter->add_option("--input", o.common.input, "trajectory CSV")->check(CLI::ExistingFile);
  filter->add_option("--start", o.start, "window start in seconds (default: first sample)");

  auto* det = app.add_subcommand("detect", "sliding-window damage detection");
  add_common(det);
  det->add_option("--input", o.common.input, "trajectory CSV")->check(CLI::ExistingFile);
  det->add_option("--series", o.series, "also write the fluctuation series to this CSV");

  auto* identify = app.add_subcommand("identify", "GA damage identification");
  add_common(identify);
  identify->add_option("--input", o.common.input, "trajectory CSV")->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "exhaustive cost table over every feasible morphology");
  add_common(oracle);
  oracle->add_option("--input", o.common.input, "trajectory CSV")->check(CLI::ExistingFile);

  auto* scenario = app.add_subcommand("scenario", "run a named damage scenario end to end");
  add_common(scenario);
  scenario->add_option("--name", o.scenario, "scenario name, e.g. legs14_missed");
  scenario->add_flag("--corrupt", o.corrupt, "apply bench corruption when the config has none");
  scenario->add_option("--runs", o.runs, "number of runs (default: the scenario's run count when corrupted, else 1)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'mlrid --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (corrupt->parsed()) return cmd_corrupt(o, out);
    if (filter->parsed()) return cmd_filter(o, out);
    if (det->parsed()) return cmd_detect(o, out);
    if (identify->parsed()) return cmd_identify(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out);
    if (scenario->parsed()) return cmd_scenario(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "usage error: no command\n";
  return kExitUsage;
}

}  // namespace mlrid::cli
