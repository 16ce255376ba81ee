#include "cranerl/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cranerl {

Eigen::Matrix3d pitch_rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d r;
  r << c, 0.0, -s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return r;
}

Vec3 pendulum_offset_local(double alpha, double beta, double length) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  return length * Vec3(sa, ca * sb, -ca * cb);
}

static void check_ranges(const Vec6& q, const CraneModel& model) {
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = model.joints[i];
    if (q[i] < j.range_min - 1e-12 || q[i] > j.range_max + 1e-12)
      throw std::domain_error(j.joint_id + " position " + std::to_string(q[i]) + " outside range");
  }
}

CraneFrames forward_kinematics(const Vec6& q, const CraneModel& model) {
  check_ranges(q, model);
  const auto& g = model.geometry;

  CraneFrames f;
  const Eigen::Matrix3d yaw = Eigen::AngleAxisd(q[0], Vec3::UnitZ()).toRotationMatrix();

  f.pillar_top.linear() = yaw;
  f.pillar_top.translation() = Vec3(0.0, 0.0, g.pillar_height);

  const Eigen::Matrix3d r_inner = yaw * pitch_rotation(q[1]);
  f.elbow.linear() = r_inner;
  f.elbow.translation() = f.pillar_top.translation() + r_inner * Vec3(g.boom_inner_length, 0.0, 0.0);

  const Eigen::Matrix3d r_outer = r_inner * pitch_rotation(q[2]);
  f.tip.linear() = r_outer;
  f.tip.translation() = f.elbow.translation() + r_outer * Vec3(g.boom_outer_length + q[3], 0.0, 0.0);
  return f;
}

GrappleFrame grapple_pose(const Vec6& q, double alpha, double beta, const CraneModel& model) {
  const CraneFrames f = forward_kinematics(q, model);
  const Eigen::Matrix3d yaw = Eigen::AngleAxisd(q[0], Vec3::UnitZ()).toRotationMatrix();
  GrappleFrame gf;
  gf.center = f.tip.translation() + yaw * pendulum_offset_local(alpha, beta, model.geometry.pendulum_length);
  gf.yaw = q[0] + q[4];
  return gf;
}

LinkComs link_coms(const Vec6& q, double alpha, double beta, const CraneModel& model) {
  const auto& g = model.geometry;
  const CraneFrames f = forward_kinematics(q, model);
  const Eigen::Matrix3d yaw = Eigen::AngleAxisd(q[0], Vec3::UnitZ()).toRotationMatrix();
  const Vec3 inner_dir = f.elbow.linear() * Vec3::UnitX();
  const Vec3 outer_dir = f.tip.linear() * Vec3::UnitX();

  LinkComs out;
  out.com[0] = Vec3(0.0, 0.0, g.com_pillar);
  out.com[1] = f.pillar_top.translation() + inner_dir * g.com_inner;
  out.com[2] = f.elbow.translation() + outer_dir * g.com_outer;
  out.com[3] = f.elbow.translation() + outer_dir * (g.com_telescope + q[3]);
  out.com[4] = f.tip.translation();
  out.grapple_center = f.tip.translation() + yaw * pendulum_offset_local(alpha, beta, g.pendulum_length);
  out.com[5] = out.grapple_center;
  return out;
}

double horizontal_reach_at(double tip_z, const CraneModel& model) {
  const auto& g = model.geometry;
  const double arm = g.boom_inner_length + g.boom_outer_length + g.telescope_max;
  const double dz = tip_z - g.pillar_height;
  if (std::abs(dz) > arm) throw std::domain_error("tip height outside the work envelope");
  const double elevation = std::asin(dz / arm);
  // The straight-arm pose needs q2 = elevation with q3 = 0.
  const auto& q2 = model.joints[1];
  const auto& q3 = model.joints[2];
  if (elevation < q2.range_min || elevation > q2.range_max || 0.0 < q3.range_min || 0.0 > q3.range_max)
    throw std::domain_error("straight-arm pose not admissible at this height");
  return std::sqrt(arm * arm - dz * dz);
}

}  // namespace cranerl
