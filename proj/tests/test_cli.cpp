#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mlrid/trajectory_io.hpp"

using namespace mlrid;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mlrid_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const fs::path kFixtures = fs::path(MLRID_SOURCE_DIR) / "data" / "fixtures";
const fs::path kScenarios = fs::path(MLRID_SOURCE_DIR) / "data" / "scenarios";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  CHECK(invoke({"detect", "--bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"detect", "--input", "/no/such/file.csv"}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("runtime errors exit 1 with a diagnostic") {
  const auto r = invoke({"simulate", "--morphology", "[101][111][111][111][111][111]", "--out", fresh("bad").string()});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("link logic") != std::string::npos);
  CHECK(invoke({"scenario", "--name", "nope", "--out", fresh("bad2").string()}).code == cli::kExitFailure);
  CHECK(invoke({"identify", "--out", fresh("bad3").string()}).code == cli::kExitFailure);
}

TEST_CASE("simulate then corrupt then filter") {
  const auto dir = fresh("chain");
  REQUIRE(invoke({"simulate", "--morphology", "[111][111][000][000][111][111]", "--samples", "2048", "--duration",
                  "10", "--out", dir.string()})
              .code == 0);
  CHECK(line_count(dir / "simulated.csv") == 2049);
  REQUIRE(invoke({"corrupt", "--input", (dir / "simulated.csv").string(), "--seed", "4", "--out", dir.string()})
              .code == 0);
  const auto corrupted = load_trajectory(dir / "corrupted.csv");
  CHECK(corrupted.time.front() == doctest::Approx(0.3));

  const auto before = slurp(dir / "corrupted.csv");
  REQUIRE(invoke({"filter", "--input", (dir / "corrupted.csv").string(), "--start", "0.5", "--out", dir.string()})
              .code == 0);
  CHECK(slurp(dir / "corrupted.csv") == before);
  CHECK(line_count(dir / "filtered.csv") == 1025);
  for (const char* ch : {"roll", "pitch", "yaw"}) {
    for (const char* kind : {"original", "filtered"}) {
      const auto p = dir / (std::string("ps_") + ch + "_" + kind + ".csv");
      REQUIRE(fs::exists(p));
      CHECK(line_count(p) == 514);
      CHECK(slurp(p).rfind("freq_hz,power\n", 0) == 0);
    }
  }
}

TEST_CASE("detect on the bundled demonstration fixture") {
  const auto dir = fresh("detect");
  const auto r = invoke({"detect", "--input", (kFixtures / "detection_demo.csv").string(), "--series",
                         (fs::temp_directory_path() / "mlrid_cli_series.csv").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("damaged: true") != std::string::npos);
  const auto pos = r.out.find("damage_time_s: ");
  REQUIRE(pos != std::string::npos);
  const double t = std::stod(r.out.substr(pos + 15));
  CHECK(t >= 19.0);
  CHECK(t <= 21.1);
  CHECK(r.out.find("config_hash: ") != std::string::npos);
  CHECK(fs::exists(dir / "detection.txt"));
}

TEST_CASE("identify on the bundled legs 1 and 4 fixture") {
  const auto dir = fresh("identify");
  const auto r = invoke({"identify", "--input", (kFixtures / "legs14_missed.csv").string(), "--seed", "1", "--out",
                         dir.string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(dir / "generations.csv") == 22);
  CHECK(fs::exists(dir / "identify_report.txt"));
  INFO(r.out);
  CHECK(r.out.find("damaged_legs: 1,4\n") != std::string::npos);
}

TEST_CASE("oracle writes every feasible morphology") {
  const auto dir = fresh("oracle");
  const auto r = invoke({"oracle", "--config", (kScenarios / "legs34_missed.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(dir / "oracle_table.csv") == 4097);
}

TEST_CASE("scenario runs are reproducible from config and seed") {
  const auto a = invoke({"scenario", "--config", (kScenarios / "leg3_missed.json").string(), "--out",
                         fresh("sa").string()});
  const auto b = invoke({"scenario", "--config", (kScenarios / "leg3_missed.json").string(), "--out",
                         fresh("sb").string()});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("runs 2") != std::string::npos);
  const auto strip = [](std::string s) {
    auto p = s.find("mean wall time");
    return s.substr(0, p);
  };
  CHECK(strip(a.out) == strip(b.out));
}
