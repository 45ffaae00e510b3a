#include "mlrid/trajectory.hpp"

#include <cmath>
#include <string>

#include "mlrid/errors.hpp"

namespace mlrid {

void OrientationTrajectory::validate() const {
  if (roll.size() < 2 || pitch.size() != roll.size() || yaw.size() != roll.size()) {
    throw ArgumentError("trajectory channels must share a length of at least 2");
  }
  if (!(dt > 0.0) || !std::isfinite(t0)) throw ArgumentError("trajectory time base is invalid");
  for (const auto* ch : {&roll, &pitch, &yaw}) {
    for (double v : *ch) {
      if (!std::isfinite(v)) throw ArgumentError("trajectory holds a non-finite angle");
    }
  }
}

void OrientationRecord::validate() const {
  const auto n = time.size();
  if (roll.size() != n || pitch.size() != n || yaw.size() != n) {
    throw ArgumentError("record channels differ in length");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(time[k] > time[k - 1])) {
      throw ArgumentError("record timestamps must be strictly increasing (sample " + std::to_string(k) + ")");
    }
  }
}

OrientationRecord OrientationRecord::from(const OrientationTrajectory& traj) {
  OrientationRecord rec;
  rec.time.resize(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) rec.time[k] = traj.time(k);
  rec.roll = traj.roll;
  rec.pitch = traj.pitch;
  rec.yaw = traj.yaw;
  return rec;
}

}  // namespace mlrid
