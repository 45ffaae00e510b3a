#include "mlrid/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mlrid/errors.hpp"

namespace mlrid {
namespace {

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

// Antiderivative of smoothstep on [0, u].
double smoothstep_integral(double u) { return u * u * u - 0.5 * u * u * u * u; }

double cycle_phase(double t, double period) {
  const double x = t / period;
  return x - std::floor(x);
}

int lateral_sign(double x) {
  if (std::abs(x) < 1e-12) return 0;
  return x > 0.0 ? 1 : -1;
}

}  // namespace

void GaitParams::validate(const RobotSpec& spec) const {
  if (!(period > 0.0)) throw ConfigError("gait period must be positive");
  if (!(duty > 0.0 && duty < 1.0)) throw ConfigError("gait duty must lie strictly between 0 and 1");
  if (!(stride >= 0.0) || !(step_height >= 0.0)) throw ConfigError("stride and step height must be non-negative");
  if (!(body_height > 0.0) || !(foot_spread >= 0.0)) throw ConfigError("stance geometry must be non-negative with a positive body height");
  if (group_a.empty() || group_b.empty()) throw ConfigError("both tripod groups need at least one leg");
  std::set<int> seen;
  for (const auto* group : {&group_a, &group_b}) {
    for (int leg : *group) {
      if (leg < 1 || leg > spec.leg_count()) throw ConfigError("gait group names leg " + std::to_string(leg) + " which does not exist");
      if (!seen.insert(leg).second) throw ConfigError("leg " + std::to_string(leg) + " appears in both tripod groups");
    }
  }
  if (static_cast<int>(seen.size()) != spec.leg_count()) throw ConfigError("tripod groups must cover every leg");
}

void SurrogateGains::validate() const {
  if (!(leg_stiffness > 0.0)) throw ConfigError("leg stiffness must be positive");
  if (!(deficit_gain >= 0.0)) throw ConfigError("deficit gain must be non-negative");
  if (!(max_tilt > 0.0 && max_tilt < std::numbers::pi / 2)) throw ConfigError("max tilt must lie in (0, pi/2)");
  if (!(yaw_gain >= 0.0)) throw ConfigError("yaw gain must be non-negative");
  if (!(transition > 0.0 && transition < 0.5)) throw ConfigError("transition must lie in (0, 0.5)");
  if (!(gravity > 0.0)) throw ConfigError("gravity must be positive");
}

std::vector<int> tripod_support_set(const GaitParams& gait, double t) {
  return cycle_phase(t, gait.period) < gait.duty ? gait.group_a : gait.group_b;
}

SurrogateModel::SurrogateModel(const RobotSpec& spec, const MorphologyVector& morphology, const GaitParams& gait,
                               std::optional<TerrainBias> terrain, const SurrogateGains& gains)
    : gait_(gait), gains_(gains) {
  spec.validate();
  gait.validate(spec);
  gains.validate();
  if (gains.transition >= std::min(gait.duty, 1.0 - gait.duty)) {
    throw ConfigError("load transition must be shorter than either stance phase");
  }
  const auto repaired = apply_link_logic(morphology, spec);
  if (repaired != morphology) {
    throw ArgumentError("morphology " + morphology.to_string() + " is not feasible");
  }

  const int legs = spec.leg_count();
  int load_bearing = 0;
  for (int i = 0; i < legs; ++i) load_bearing += morphology.present_links(i) > 0 ? 1 : 0;
  if (load_bearing < 3) {
    throw SimulationError("statically unsupportable: only " + std::to_string(load_bearing) +
                          " legs keep a link in " + morphology.to_string());
  }

  const double slope_gain = terrain ? std::tan(terrain->slope) : 0.0;
  const double heading = terrain ? terrain->heading : 0.0;

  std::vector<double> mount_x(static_cast<std::size_t>(legs));
  std::vector<double> mount_y(static_cast<std::size_t>(legs));
  std::vector<double> reach(static_cast<std::size_t>(legs));
  std::vector<double> reach_ratio(static_cast<std::size_t>(legs));
  leg_mass_.assign(static_cast<std::size_t>(legs), 0.0);
  total_mass_ = spec.body_mass;

  for (int i = 0; i < legs; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double azimuth = spec.mount_angles[u];
    const double sx = std::sin(azimuth);
    const double sy = std::cos(azimuth);
    mount_x[u] = spec.mount_radius * sx;
    mount_y[u] = spec.mount_radius * sy;

    double present = 0.0;
    double radial = spec.mount_radius;
    for (int j = 0; j < spec.links_per_leg[u]; ++j) {
      const auto v = static_cast<std::size_t>(j);
      const double len = spec.link_lengths[u][v];
      if (morphology.bit(morphology.leg_offset(i) + j)) {
        const double m = spec.link_masses[u][v];
        const double centre = radial + 0.5 * len;
        leg_mass_[u] += m;
        static_com_x_ += m * centre * sx;
        static_com_y_ += m * centre * sy;
        present += len;
      }
      radial += len;
    }
    total_mass_ += leg_mass_[u];
    reach[u] = present;
    reach_ratio[u] = present / spec.full_length(i);
  }

  group_of_.assign(static_cast<std::size_t>(legs), 0);
  for (int leg : gait.group_b) group_of_[static_cast<std::size_t>(leg - 1)] = 1;

  auto build = [&](const std::vector<int>& numbers) {
    Group g;
    const auto n = static_cast<Eigen::Index>(numbers.size());
    Eigen::MatrixXd basis(n, 3);
    g.ground.resize(n);
    g.reach.resize(n);
    g.foot_x.resize(n);
    g.foot_y.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const int leg = numbers[static_cast<std::size_t>(r)] - 1;
      const auto u = static_cast<std::size_t>(leg);
      g.legs.push_back(leg);
      basis(r, 0) = 1.0;
      basis(r, 1) = mount_x[u];
      basis(r, 2) = mount_y[u];
      g.ground(r) = slope_gain * (mount_x[u] * std::sin(heading) + mount_y[u] * std::cos(heading));
      g.reach(r) = reach[u];
      g.foot_x(r) = gait.foot_spread * mount_x[u] / spec.mount_radius;
      g.foot_y(r) = gait.foot_spread * mount_y[u] / spec.mount_radius;
      g.imbalance += lateral_sign(mount_x[u]) * reach_ratio[u];
    }
    g.plane_pinv = basis.completeOrthogonalDecomposition().pseudoInverse();
    Eigen::MatrixXd equilibrium = basis.transpose();
    g.load_pinv = equilibrium.completeOrthogonalDecomposition().pseudoInverse();
    return g;
  };
  a_ = build(gait.group_a);
  b_ = build(gait.group_b);

  const double forward_speed = gait.stride / (gait.duty * gait.period);
  yaw_rate_unit_ = gains.yaw_gain * forward_speed / (2.0 * spec.mount_radius);
}

double SurrogateModel::group_a_weight(double t) const {
  const double phase = cycle_phase(t, gait_.period);
  const double d = gait_.duty;
  const double w = gains_.transition;
  if (phase < d - w) return 1.0;
  if (phase < d) return 1.0 - smoothstep((phase - (d - w)) / w);
  if (phase < 1.0 - w) return 0.0;
  return smoothstep((phase - (1.0 - w)) / w);
}

double SurrogateModel::a_weight_integral(double phase) const {
  const double d = gait_.duty;
  const double w = gains_.transition;
  if (phase <= d - w) return phase;
  if (phase <= d) {
    const double u = (phase - (d - w)) / w;
    return (d - w) + w * (u - smoothstep_integral(u));
  }
  if (phase <= 1.0 - w) return d - 0.5 * w;
  const double u = (phase - (1.0 - w)) / w;
  return d - 0.5 * w + w * smoothstep_integral(u);
}

double SurrogateModel::sweep(int leg, double phase) const {
  const bool in_b = group_of_[static_cast<std::size_t>(leg)] == 1;
  double psi = in_b ? phase - gait_.duty : phase;
  if (psi < 0.0) psi += 1.0;
  const double stance = in_b ? 1.0 - gait_.duty : gait_.duty;
  const double s = gait_.stride;
  if (psi < stance) return 0.5 * s - s * psi / stance;
  return -0.5 * s + s * (psi - stance) / (1.0 - stance);
}

std::array<double, 2> SurrogateModel::tilt(const Group& group, double phase, double weight, double com_x,
                                           double com_y) const {
  const Eigen::Index n = static_cast<Eigen::Index>(group.legs.size());
  const double wx = weight * com_x;
  const double wy = weight * com_y;
  double plane_b = 0.0;
  double plane_c = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double load = group.load_pinv(r, 0) * weight + group.load_pinv(r, 1) * wx + group.load_pinv(r, 2) * wy;
    const double fore = group.foot_y(r) + sweep(group.legs[static_cast<std::size_t>(r)], phase);
    const double needed = std::sqrt(gait_.body_height * gait_.body_height + group.foot_x(r) * group.foot_x(r) + fore * fore);
    const double deficit = std::max(0.0, needed - group.reach(r));
    const double height = group.ground(r) - gains_.deficit_gain * deficit - load / gains_.leg_stiffness;
    plane_b += group.plane_pinv(1, r) * height;
    plane_c += group.plane_pinv(2, r) * height;
  }
  const double limit = gains_.max_tilt;
  const double roll = limit * std::tanh(std::atan(-plane_b) / limit);
  const double pitch = limit * std::tanh(std::atan(plane_c) / limit);
  return {roll, pitch};
}

double SurrogateModel::yaw_at(double t) const {
  const double period = gait_.period;
  const double cycles = std::floor(t / period);
  const double phase = t / period - cycles;
  const double time_on_a = period * (cycles * gait_.duty + a_weight_integral(phase));
  return yaw_rate_unit_ * (a_.imbalance * time_on_a + b_.imbalance * (t - time_on_a));
}

Orientation SurrogateModel::at(double t) const {
  const double phase = cycle_phase(t, gait_.period);
  double com_x = static_com_x_;
  double com_y = static_com_y_;
  for (std::size_t i = 0; i < leg_mass_.size(); ++i) {
    if (leg_mass_[i] > 0.0) com_y += leg_mass_[i] * sweep(static_cast<int>(i), phase);
  }
  com_x /= total_mass_;
  com_y /= total_mass_;
  const double weight = gains_.gravity * total_mass_;

  const double wa = group_a_weight(t);
  const auto ta = tilt(a_, phase, weight, com_x, com_y);
  const auto tb = tilt(b_, phase, weight, com_x, com_y);
  return {wa * ta[0] + (1.0 - wa) * tb[0], wa * ta[1] + (1.0 - wa) * tb[1], yaw_at(t)};
}

OrientationTrajectory simulate_orientation(const RobotSpec& spec, const MorphologyVector& morphology,
                                           const GaitParams& gait, double duration, int samples,
                                           std::optional<TerrainBias> terrain, const SurrogateGains& gains) {
  if (samples < 16) throw ArgumentError("surrogate needs at least 16 samples");
  if (!(duration > 0.0)) throw ArgumentError("simulation duration must be positive");
  const SurrogateModel model(spec, morphology, gait, terrain, gains);
  OrientationTrajectory traj;
  traj.t0 = 0.0;
  traj.dt = duration / samples;
  const auto n = static_cast<std::size_t>(samples);
  traj.roll.resize(n);
  traj.pitch.resize(n);
  traj.yaw.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto o = model.at(traj.time(k));
    traj.roll[k] = o.roll;
    traj.pitch[k] = o.pitch;
    traj.yaw[k] = o.yaw;
  }
  return traj;
}

int mirror_leg(const RobotSpec& spec, int leg) {
  const double target = -spec.mount_angles.at(static_cast<std::size_t>(leg - 1));
  for (int j = 0; j < spec.leg_count(); ++j) {
    const double diff = std::remainder(spec.mount_angles[static_cast<std::size_t>(j)] - target, 2.0 * std::numbers::pi);
    if (std::abs(diff) < 1e-9) return j + 1;
  }
  throw StructuralError("leg " + std::to_string(leg) + " has no mirror partner");
}

MorphologyVector mirror_morphology(const RobotSpec& spec, const MorphologyVector& m) {
  std::vector<int> counts(static_cast<std::size_t>(spec.leg_count()));
  for (int leg = 1; leg <= spec.leg_count(); ++leg) {
    counts[static_cast<std::size_t>(mirror_leg(spec, leg) - 1)] = m.present_links(leg - 1);
  }
  return MorphologyVector::from_counts(spec, counts);
}

}  // namespace mlrid
