#pragma once

#include <Eigen/Dense>

namespace cranerl {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Iso3 = Eigen::Isometry3d;

// Fixed integration step; the controller acts every second step.
inline constexpr double kSimDt = 0.02;
inline constexpr int kSimStepsPerDecision = 2;
inline constexpr double kGravityAccel = 9.81;

inline constexpr int kNumJoints = 6;
inline constexpr int kObsPerFrame = 23;
inline constexpr int kFrameStackDepth = 8;
inline constexpr int kStackedObsDim = kObsPerFrame * kFrameStackDepth;

}  // namespace cranerl
