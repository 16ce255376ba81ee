#pragma once

#include <array>

#include "cranerl/geometry.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

// Key frames of the chain, expressed in the crane base frame
// (origin at the pillar foot, z up, x toward the default work area).
struct CraneFrames {
  Iso3 pillar_top = Iso3::Identity();
  Iso3 elbow = Iso3::Identity();
  Iso3 tip = Iso3::Identity();
};

// Grapple centre hangs pendulum_length below the boom tip, deflected
// by the two passive swing angles; yaw is the slew-chain yaw plus q5.
struct GrappleFrame {
  Vec3 center = Vec3::Zero();
  double yaw = 0.0;
};

// Pitch rotation that raises +x toward +z for positive angles.
Eigen::Matrix3d pitch_rotation(double angle);

// Pendulum deflection in the slewed frame: alpha swings along the
// boom direction, beta laterally; (0, 0) hangs straight down.
Vec3 pendulum_offset_local(double alpha, double beta, double length);

CraneFrames forward_kinematics(const Vec6& q, const CraneModel& model);

GrappleFrame grapple_pose(const Vec6& q, double alpha, double beta, const CraneModel& model);

// World positions of the six link centres of mass plus the grapple
// centre (where an attached payload also hangs).
struct LinkComs {
  std::array<Vec3, kNumJoints> com;
  Vec3 grapple_center;
};

LinkComs link_coms(const Vec6& q, double alpha, double beta, const CraneModel& model);

// Largest horizontal tip radius attainable with a straight arm at the
// given tip height. Throws if the height is outside the work envelope.
double horizontal_reach_at(double tip_z, const CraneModel& model);

}  // namespace cranerl
