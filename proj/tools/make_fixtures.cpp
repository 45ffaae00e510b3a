// Regenerates the CSV fixtures under data/fixtures.
#include <filesystem>
#include <iostream>

#include "mlrid/errors.hpp"
#include "mlrid/scenarios.hpp"
#include "mlrid/trajectory_io.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path("data/fixtures");
  try {
    fs::create_directories(dir);
    const auto spec = mlrid::RobotSpec::hexapod();
    const mlrid::GaitParams gait;

    mlrid::save_trajectory(mlrid::OrientationRecord::from(mlrid::detection_trace(spec, gait)),
                           dir / "detection_demo.csv");

    mlrid::ExperimentOptions opt;
    opt.corruption = mlrid::CorruptionConfig::bench(7);
    const auto truth = mlrid::find_scenario("legs14_missed").morphology(spec);
    mlrid::save_trajectory(mlrid::synthesize_experiment(spec, truth, gait, opt), dir / "legs14_missed.csv");
  } catch (const mlrid::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << "wrote fixtures to " << dir.string() << '\n';
  return 0;
}
