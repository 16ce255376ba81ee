#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "cranerl/actuator.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

// Link lengths, masses and centre-of-mass offsets of the simplified
// six-link chain: pillar, inner boom, outer boom, telescope, rotator,
// grapple. C.o.M offsets are measured along each link from its
// proximal joint; the telescope C.o.M slides with q4.
struct CraneGeometry {
  double pillar_height = 1.5;
  double boom_inner_length = 3.0;   // pillar top to elbow
  double boom_outer_length = 2.0;   // elbow to retracted tip
  double telescope_max = 2.0;
  double pendulum_length = 0.8;
  double pendulum_damping = 0.5;  // 1/s
  double reach = 7.0;
  double total_mass = 2000.0;

  std::array<double, kNumJoints> link_mass{500.0, 500.0, 400.0, 200.0, 100.0, 300.0};
  double com_pillar = 0.75;
  double com_inner = 1.5;
  double com_outer = 1.0;
  double com_telescope = 1.0;  // from the elbow, before the q4 slide

  void validate() const {
    if (std::abs(boom_inner_length + boom_outer_length + telescope_max - reach) > 1e-9)
      throw std::invalid_argument("link lengths must sum to the crane reach");
    double m = 0.0;
    for (double mi : link_mass) m += mi;
    if (std::abs(m - total_mass) > 1e-6)
      throw std::invalid_argument("link masses must sum to the crane mass");
    if (!(pillar_height > 0.0 && pendulum_length > 0.0))
      throw std::invalid_argument("pillar and pendulum lengths must be positive");
  }
};

struct CraneModel {
  CraneGeometry geometry;
  ActuatorRoster joints = default_actuators();

  void validate() const {
    geometry.validate();
    for (const auto& j : joints) j.validate();
  }
};

}  // namespace cranerl
