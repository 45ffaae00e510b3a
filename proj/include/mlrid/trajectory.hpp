#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace mlrid {

inline constexpr double kDeg = std::numbers::pi / 180.0;

constexpr double deg_to_rad(double deg) { return deg * kDeg; }
constexpr double rad_to_deg(double rad) { return rad / kDeg; }

/// Uniformly sampled body orientation (radians). Sample k sits at t0 + k*dt.
struct OrientationTrajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> roll;
  std::vector<double> pitch;
  std::vector<double> yaw;

  std::size_t size() const { return roll.size(); }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double sample_rate() const { return 1.0 / dt; }

  /// Throws ArgumentError unless the channels share a length >= 2, dt > 0
  /// and every angle is finite.
  void validate() const;
};

/// Timestamped orientation samples as recorded by an IMU, possibly with
/// non-uniform spacing. Angles in radians.
struct OrientationRecord {
  std::vector<double> time;
  std::vector<double> roll;
  std::vector<double> pitch;
  std::vector<double> yaw;

  std::size_t size() const { return time.size(); }
  bool empty() const { return time.empty(); }

  /// Throws ArgumentError on ragged channels or non-increasing timestamps.
  void validate() const;

  static OrientationRecord from(const OrientationTrajectory& traj);
};

}  // namespace mlrid
