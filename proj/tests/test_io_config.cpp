#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlrid/config.hpp"
#include "mlrid/errors.hpp"
#include "mlrid/trajectory_io.hpp"

using namespace mlrid;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mlrid_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

OrientationRecord sample_record(std::size_t n) {
  OrientationRecord r;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 0.1 + 0.0049 * k;
    r.time.push_back(t);
    r.roll.push_back(0.3 * std::sin(7.0 * t));
    r.pitch.push_back(-0.01 * t);
    r.yaw.push_back(1.0 / 3.0 + t);
  }
  return r;
}

std::string parse_message(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)read_trajectory(in, "x.csv");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("trajectory CSV round trip") {
  const auto dir = scratch_dir("roundtrip");
  const auto rec = sample_record(1024);
  save_trajectory(rec, dir / "t.csv");
  const auto back = load_trajectory(dir / "t.csv");
  REQUIRE(back.size() == rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    CHECK(std::abs(back.time[k] - rec.time[k]) < 1e-9);
    CHECK(std::abs(back.roll[k] - rec.roll[k]) < 1e-9);
    CHECK(std::abs(back.pitch[k] - rec.pitch[k]) < 1e-9);
    CHECK(std::abs(back.yaw[k] - rec.yaw[k]) < 1e-9);
  }

  std::ifstream in(dir / "t.csv");
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == kTrajectoryHeader);
  ++lines;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1025);

  save_trajectory(back, dir / "u.csv");
  std::ifstream a(dir / "t.csv");
  std::ifstream b(dir / "u.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());

  save_trajectory(OrientationRecord{}, dir / "empty.csv");
  std::ifstream e(dir / "empty.csv");
  std::stringstream se;
  se << e.rdbuf();
  CHECK(se.str() == std::string(kTrajectoryHeader) + "\n");
}

TEST_CASE("trajectory CSV parse errors name the line") {
  const std::string h = std::string(kTrajectoryHeader) + "\n";
  CHECK(parse_message("").find("x.csv:1") != std::string::npos);
  CHECK(parse_message("t,r,p,y\n0,0,0,0\n").find("x.csv:1") != std::string::npos);
  CHECK(parse_message(h + "0,0,0,0\n0.1,0,0,0\n0.1,0,0,0\n").find("x.csv:4") != std::string::npos);
  CHECK(parse_message(h + "0,0,0,0\n0.1,abc,0,0\n").find("x.csv:3") != std::string::npos);
  CHECK(parse_message(h + "0,0,0\n").find("x.csv:2") != std::string::npos);
  CHECK(parse_message(h + "0,0,0,0,0\n").find("x.csv:2") != std::string::npos);
  CHECK(parse_message(h + "0,0,0,0\n\n0.2,1,2,3\n").empty());
  CHECK_THROWS_AS(load_trajectory("/nonexistent/file.csv"), ParseError);
  CHECK_THROWS_AS(save_trajectory(sample_record(3), "/nonexistent/dir/out.csv"), ResourceError);
}

TEST_CASE("angles are degrees on disk") {
  std::istringstream in(std::string(kTrajectoryHeader) + "\n0,180,90,-45\n");
  const auto r = read_trajectory(in);
  CHECK(r.roll[0] == doctest::Approx(std::numbers::pi));
  CHECK(r.pitch[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(r.yaw[0] == doctest::Approx(-std::numbers::pi / 4));
}

TEST_CASE("config defaults match the standard identification parameters") {
  const PipelineConfig cfg;
  CHECK(cfg.ga.pop_size == 10);
  CHECK(cfg.ga.generations == 20);
  CHECK(cfg.ga.cr == 0.9);
  CHECK(cfg.ga.mr == 0.33);
  CHECK(cfg.ga.sim_time == 5.0);
  CHECK(cfg.filter.f_cutoff == 10.0);
  CHECK(cfg.filter.p_threshold == 0.1);
  CHECK(cfg.detector.window == 0.5);
  CHECK(cfg.detector.step == 0.1);
  CHECK(cfg.detector.persistence == 2.0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config JSON round trip and hashing") {
  auto cfg = config_from_json(nlohmann::json::parse(R"({
    "seed": 12,
    "ga": {"pop_size": 12, "cr": 0.8},
    "detector": {"fluct_threshold_deg": 4.0},
    "corruption": {"noise_sigma_deg": 1.0, "drift_rate_deg_s": 0.1, "delay": 0.3, "jitter_hz": [950, 1000]},
    "terrain": {"slope_deg": 7.0, "heading_deg": 90.0},
    "experiment": {"scenario": "legs14_missed"}
  })"));
  CHECK(cfg.seed == 12);
  CHECK(cfg.ga.rng_seed == 12);
  CHECK(cfg.corruption->rng_seed == 12);
  CHECK(cfg.ga.pop_size == 12);
  CHECK(cfg.detector.fluct_threshold == doctest::Approx(deg_to_rad(4.0)));
  CHECK(cfg.terrain->slope == doctest::Approx(deg_to_rad(7.0)));
  CHECK(cfg.corruption->jitter->rate_low == 950.0);

  const auto again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
  CHECK(config_hash(again) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  auto other = cfg;
  other.set_seed(13);
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("config errors") {
  using nlohmann::json;
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"ga": {"pop_size": 7}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"ga": {"pop_size": "ten"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"filter": {"fc_hz": -1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"experiment": {"scenario": "nope"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"experiment": {"truth": "[101]"}})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent.json"), ConfigError);

  const auto dir = scratch_dir("badjson");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
}

TEST_CASE("bundled scenario configs load") {
  const fs::path dir = fs::path(MLRID_SOURCE_DIR) / "data" / "scenarios";
  int count = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto cfg = load_config(entry.path());
    CHECK(cfg.experiment.scenario);
    CHECK(cfg.corruption);
    ++count;
  }
  CHECK(count == 8);
}

TEST_CASE("relative input paths resolve against the config file") {
  const auto dir = scratch_dir("relative");
  std::ofstream(dir / "c.json") << R"({"experiment": {"input": "rec.csv"}})";
  const auto cfg = load_config(dir / "c.json");
  CHECK(*cfg.experiment.input == dir / "rec.csv");
}
