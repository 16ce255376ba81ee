#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "cranerl/types.hpp"

namespace cranerl {

enum class JointKind { revolute, prismatic };

// One actuated joint of the crane: a velocity servo with effort and
// speed limits. Units are rad, rad/s, N*m for revolute joints and
// m, m/s, N for prismatic ones; inertia_eff is the lumped inertia the
// servo sees (kg*m^2 or kg).
struct ActuatorSpec {
  std::string joint_id;
  JointKind kind = JointKind::revolute;
  double range_min = -1.0;
  double range_max = 1.0;
  double v_max = 1.0;
  double effort_max = 1.0;
  double inertia_eff = 1.0;
  double rate_fraction = 1.0 / 30.0;

  void validate() const {
    if (!(range_min < range_max)) throw std::invalid_argument(joint_id + ": range_min must be < range_max");
    if (!(v_max > 0.0)) throw std::invalid_argument(joint_id + ": v_max must be positive");
    if (!(effort_max > 0.0)) throw std::invalid_argument(joint_id + ": effort_max must be positive");
    if (!(inertia_eff > 0.0)) throw std::invalid_argument(joint_id + ": inertia_eff must be positive");
    if (!(rate_fraction > 0.0 && rate_fraction <= 1.0))
      throw std::invalid_argument(joint_id + ": rate_fraction must be in (0, 1]");
  }
};

using ActuatorRoster = std::array<ActuatorSpec, kNumJoints>;

// q1 slew, q2/q3 boom pitches, q4 telescope, q5 rotator, q6 grapple
// aperture (the gap between claw tips, 0 = fully closed).
inline ActuatorRoster default_actuators() {
  ActuatorRoster a;
  a[0] = {"q1", JointKind::revolute, -3.8, 3.8, 0.6, 60e3, 8000.0, 1.0 / 30.0};
  a[1] = {"q2", JointKind::revolute, -0.2, 1.4, 0.4, 100e3, 9000.0, 1.0 / 30.0};
  a[2] = {"q3", JointKind::revolute, -2.6, 0.2, 0.4, 60e3, 4000.0, 1.0 / 30.0};
  a[3] = {"q4", JointKind::prismatic, 0.0, 2.0, 0.8, 20e3, 700.0, 1.0 / 30.0};
  a[4] = {"q5", JointKind::revolute, -2.0, 2.0, 1.5, 2e3, 50.0, 1.0 / 30.0};
  a[5] = {"q6", JointKind::prismatic, 0.0, 1.6, 0.5, 10e3, 100.0, 1.0 / 30.0};
  return a;
}

}  // namespace cranerl
