#include "mlrid/detector.hpp"

#include <algorithm>
#include <cmath>

#include "mlrid/errors.hpp"

namespace mlrid {
namespace {

struct WindowGrid {
  std::size_t width = 0;  // samples spanned beyond the first
  std::size_t stride = 0;
};

WindowGrid make_grid(std::size_t length, double dt, const DetectorConfig& cfg) {
  cfg.validate();
  if (!(dt > 0.0)) throw ArgumentError("sample spacing must be positive");
  WindowGrid g;
  g.width = static_cast<std::size_t>(std::llround(cfg.window / dt));
  g.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.step / dt)));
  if (g.width == 0 || length < g.width + 1) {
    throw ArgumentError("trace of " + std::to_string(length) + " samples is shorter than one " +
                        std::to_string(cfg.window) + " s window");
  }
  return g;
}

double range_of(std::span<const double> x) {
  const auto [lo, hi] = std::ranges::minmax_element(x);
  return *hi - *lo;
}

}  // namespace

void DetectorConfig::validate() const {
  if (!(window > 0.0) || !(step > 0.0) || step > window) throw ConfigError("detector needs 0 < step <= window");
  if (persistence < window) throw ConfigError("detector persistence must be at least one window");
  if (!(fluct_threshold > 0.0) || !(motion_floor > 0.0)) throw ConfigError("detector thresholds must be positive");
}

double WindowStats::motion_statistic() const { return std::max({roll, pitch, yaw}); }

std::vector<FluctuationPoint> window_fluctuation(std::span<const double> channel, double dt, const DetectorConfig& cfg,
                                                 double t0) {
  const auto grid = make_grid(channel.size(), dt, cfg);
  std::vector<FluctuationPoint> out;
  for (std::size_t i = 0; i + grid.width < channel.size(); i += grid.stride) {
    const double end = t0 + static_cast<double>(i + grid.width) * dt;
    out.push_back({end, range_of(channel.subspan(i, grid.width + 1))});
  }
  return out;
}

DetectionReport detect(const OrientationTrajectory& traj, const DetectorConfig& cfg) {
  traj.validate();
  const auto roll = window_fluctuation(traj.roll, traj.dt, cfg, traj.t0);
  const auto pitch = window_fluctuation(traj.pitch, traj.dt, cfg, traj.t0);
  const auto yaw = window_fluctuation(traj.yaw, traj.dt, cfg, traj.t0);

  DetectionReport report;
  report.fluctuation_series.reserve(roll.size());
  std::optional<double> run_start;
  for (std::size_t k = 0; k < roll.size(); ++k) {
    const WindowStats w{roll[k].time, roll[k].value, pitch[k].value, yaw[k].value};
    report.fluctuation_series.push_back(w);
    report.max_fluctuation = std::max(report.max_fluctuation, w.damage_statistic());
    if (!report.motion_start && w.motion_statistic() > cfg.motion_floor) report.motion_start = w.time;
    if (report.damaged) continue;
    if (w.damage_statistic() > cfg.fluct_threshold) {
      if (!run_start) run_start = w.time;
      if (w.time - *run_start >= cfg.persistence - 1e-9) {
        report.damaged = true;
        report.damage_time = run_start;
      }
    } else {
      run_start.reset();
    }
  }
  if (report.damaged && (!report.motion_start || *report.motion_start > *report.damage_time)) {
    report.motion_start = report.damage_time;
  }
  return report;
}

std::optional<double> refine_motion_onset(const OrientationTrajectory& traj, const DetectionReport& report,
                                          const DetectorConfig& cfg) {
  if (!report.motion_start) return std::nullopt;
  const auto grid = make_grid(traj.size(), traj.dt, cfg);
  const auto end_index = static_cast<std::size_t>(std::llround((*report.motion_start - traj.t0) / traj.dt));
  if (end_index <= grid.width) return traj.t0;
  const std::size_t begin = end_index - grid.width;
  const double tolerance = 0.5 * cfg.motion_floor;
  for (std::size_t k = begin; k <= end_index && k < traj.size(); ++k) {
    const double dev = std::max({std::abs(traj.roll[k] - traj.roll[begin]), std::abs(traj.pitch[k] - traj.pitch[begin]),
                                 std::abs(traj.yaw[k] - traj.yaw[begin])});
    if (dev > tolerance) return traj.time(k);
  }
  return traj.time(begin);
}

}  // namespace mlrid
