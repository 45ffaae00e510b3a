#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mlrid/morphology.hpp"
#include "mlrid/trajectory.hpp"

namespace mlrid {

/// Nominal alternating-tripod gait. Leg numbers are 1-based.
struct GaitParams {
  double period = 1.0;        // s
  double step_height = 0.03;  // m, swing clearance; descriptive only in the quasi-static model
  double stride = 0.06;       // m of forward advance per stance
  double duty = 0.5;          // fraction of the cycle group A spends in stance
  double body_height = 0.10;  // m, mount plane above flat ground
  double foot_spread = 0.15;  // m, horizontal mount-to-foothold distance along the mount azimuth
  std::vector<int> group_a{1, 4, 5};
  std::vector<int> group_b{2, 3, 6};

  /// Throws ConfigError when the gait does not partition the robot's legs.
  void validate(const RobotSpec& spec) const;
};

/// Constant ground inclination (rad); the ground rises along `heading`,
/// an azimuth measured like the leg mount angles.
struct TerrainBias {
  double slope = 0.0;
  double heading = 0.0;
};

/// Calibrated constants of the surrogate. Frozen defaults satisfy:
/// healthy walking keeps roll/pitch window fluctuation under 5 degrees,
/// and losing legs 3 and 4 drives roll fluctuation past 5 degrees while
/// pitch stays under 2 degrees.
struct SurrogateGains {
  double leg_stiffness = 540.0;           // N/m, vertical compliance of a stance leg
  double deficit_gain = 1.0;              // corner drop per metre of missing leg length
  double max_tilt = deg_to_rad(45.0);     // rad, smooth saturation of roll and pitch
  double yaw_gain = 0.67;                 // dimensionless turning efficiency of thrust imbalance
  double transition = 0.08;               // fraction of a cycle spent shifting load between tripods
  double gravity = 9.81;                  // m/s^2

  void validate() const;
};

struct Orientation {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

/// Legs of the tripod group in stance at time t (1-based numbers).
std::vector<int> tripod_support_set(const GaitParams& gait, double t);

/// Quasi-static support-plane stand-in for a whole-body dynamics engine.
///
/// At each instant the active tripod's mount points sink by their static
/// load share over the leg stiffness and by the leg's length deficit, the
/// shortfall between the leg's effective length and the distance from its
/// mount to the foothold as the foot sweeps through stance. A
/// least-squares plane through those heights (plus any terrain bias)
/// gives roll and pitch, smoothly saturated at `max_tilt`. Load moves
/// between tripods over `transition` of a cycle. Yaw integrates a rate
/// proportional to the left/right thrust imbalance of the stance legs,
/// where a leg's thrust scales with its remaining reach.
class SurrogateModel {
 public:
  /// Throws SimulationError("statically unsupportable") when fewer than
  /// three legs keep at least one link.
  SurrogateModel(const RobotSpec& spec, const MorphologyVector& morphology, const GaitParams& gait,
                 std::optional<TerrainBias> terrain = std::nullopt, const SurrogateGains& gains = {});

  Orientation at(double t) const;
  double yaw_at(double t) const;

  /// Weight of tripod A in the body attitude at time t, in [0, 1].
  double group_a_weight(double t) const;

 private:
  struct Group {
    std::vector<int> legs;           // 0-based
    Eigen::MatrixXd load_pinv;       // g x 3: [W, W cx, W cy] -> leg loads
    Eigen::MatrixXd plane_pinv;      // 3 x g: heights -> plane [a, b, c]
    Eigen::VectorXd ground;          // terrain height under each mount
    Eigen::VectorXd reach;           // effective leg length
    Eigen::VectorXd foot_x;          // nominal foothold offset from the mount
    Eigen::VectorXd foot_y;
    double imbalance = 0.0;          // signed thrust sum (right positive)
  };

  std::array<double, 2> tilt(const Group& group, double phase, double weight, double com_x, double com_y) const;
  double sweep(int leg, double phase) const;
  double a_weight_integral(double phase) const;

  GaitParams gait_;
  SurrogateGains gains_;
  Group a_;
  Group b_;
  std::vector<int> group_of_;        // 0 = A, 1 = B
  std::vector<double> leg_mass_;
  double total_mass_ = 0.0;
  double static_com_x_ = 0.0;        // mass-weighted sums, not yet divided
  double static_com_y_ = 0.0;
  double yaw_rate_unit_ = 0.0;       // rad/s per unit of imbalance
};

/// Samples the surrogate on the half-open grid t_k = k * duration / samples.
OrientationTrajectory simulate_orientation(const RobotSpec& spec, const MorphologyVector& morphology,
                                           const GaitParams& gait, double duration, int samples,
                                           std::optional<TerrainBias> terrain = std::nullopt,
                                           const SurrogateGains& gains = {});

/// Leg number (1-based) of the mirror image of `leg` across the sagittal
/// plane, matched by negated mount angle.
int mirror_leg(const RobotSpec& spec, int leg);

/// Left/right reflection of a morphology.
MorphologyVector mirror_morphology(const RobotSpec& spec, const MorphologyVector& m);

}  // namespace mlrid
