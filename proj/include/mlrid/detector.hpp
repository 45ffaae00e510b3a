#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mlrid/trajectory.hpp"

namespace mlrid {

struct DetectorConfig {
  double window = 0.5;                          // s
  double step = 0.1;                            // s
  double fluct_threshold = deg_to_rad(5.0);     // rad
  double persistence = 2.0;                     // s
  double motion_floor = deg_to_rad(0.5);        // rad

  void validate() const;
};

struct FluctuationPoint {
  double time = 0.0;   // window end
  double value = 0.0;  // max - min inside the window
};

/// One window of the detector, all channels.
struct WindowStats {
  double time = 0.0;  // window end
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  double damage_statistic() const { return roll > pitch ? roll : pitch; }
  double motion_statistic() const;
};

struct DetectionReport {
  bool damaged = false;
  std::optional<double> damage_time;
  std::optional<double> motion_start;
  double max_fluctuation = 0.0;             // over roll and pitch
  std::vector<WindowStats> fluctuation_series;
};

/// Window max-minus-min of a uniformly sampled channel. Windows start every
/// `step` seconds from the first sample and cover `window` seconds inclusive;
/// reported times are window ends relative to `t0`.
std::vector<FluctuationPoint> window_fluctuation(std::span<const double> channel, double dt, const DetectorConfig& cfg,
                                                 double t0 = 0.0);

/// Sliding-window damage detector over roll and pitch.
///
/// Damage is flagged when the larger of the roll and pitch fluctuations
/// stays above the threshold for every window whose end lies in a span of
/// at least `persistence` seconds; `damage_time` is the first window end of
/// that run. `motion_start` is the first window end at which any channel
/// (yaw included) fluctuates by more than `motion_floor`.
DetectionReport detect(const OrientationTrajectory& traj, const DetectorConfig& cfg);

/// Sharpens the window-end motion estimate to a sample instant.
///
/// If the first moving window begins at the first sample the record starts
/// in motion and its start time is returned. Otherwise the result is the
/// first sample in that window departing from the window's opening value by
/// more than half the motion floor. Exact for noise-free records; within
/// one window otherwise.
std::optional<double> refine_motion_onset(const OrientationTrajectory& traj, const DetectionReport& report,
                                          const DetectorConfig& cfg);

}  // namespace mlrid
