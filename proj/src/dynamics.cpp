#include "cranerl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cranerl {

double potential_energy(const Vec6& q, double alpha, double beta, const CraneModel& model,
                        const StepExternal& ext) {
  const LinkComs coms = link_coms(q, alpha, beta, model);
  double u = 0.0;
  for (int i = 0; i < kNumJoints; ++i) u -= model.geometry.link_mass[i] * ext.gravity.dot(coms.com[i]);
  u -= ext.payload_mass * ext.gravity.dot(coms.grapple_center);
  return u;
}

Vec6 gravity_forces(const Vec6& q, double alpha, double beta, const CraneModel& model,
                    const StepExternal& ext) {
  const auto& g = model.geometry;
  const CraneFrames f = forward_kinematics(q, model);
  const LinkComs coms = link_coms(q, alpha, beta, model);

  const Vec3 o_slew = Vec3::Zero();
  const Vec3 o_inner = f.pillar_top.translation();
  const Vec3 o_outer = f.elbow.translation();
  const Vec3 tip = f.tip.translation();
  const Eigen::Matrix3d yaw = Eigen::AngleAxisd(q[0], Vec3::UnitZ()).toRotationMatrix();
  const Vec3 axis_slew = Vec3::UnitZ();
  const Vec3 axis_pitch = yaw * Vec3(0.0, -1.0, 0.0);  // both boom pitches share it
  const Vec3 dir_telescope = f.tip.linear() * Vec3::UnitX();

  const double m_grapple = g.link_mass[5] + ext.payload_mass;

  Vec6 tau = Vec6::Zero();
  for (int i = 0; i < kNumJoints; ++i)
    tau[0] += g.link_mass[i] * ext.gravity.dot(axis_slew.cross(coms.com[i] - o_slew));
  tau[0] += ext.payload_mass * ext.gravity.dot(axis_slew.cross(coms.grapple_center - o_slew));

  // The pendulum offset does not rotate with the boom pitches or the
  // telescope, so the grapple/payload lever arm is taken at the tip.
  for (int i = 1; i <= 4; ++i)
    tau[1] += g.link_mass[i] * ext.gravity.dot(axis_pitch.cross(coms.com[i] - o_inner));
  tau[1] += m_grapple * ext.gravity.dot(axis_pitch.cross(tip - o_inner));

  for (int i = 2; i <= 4; ++i)
    tau[2] += g.link_mass[i] * ext.gravity.dot(axis_pitch.cross(coms.com[i] - o_outer));
  tau[2] += m_grapple * ext.gravity.dot(axis_pitch.cross(tip - o_outer));

  tau[3] = (g.link_mass[3] + g.link_mass[4] + m_grapple) * ext.gravity.dot(dir_telescope);

  tau[4] = 0.0;  // rotator spins about the hang axis
  tau[5] = 0.0;  // claws open symmetrically
  return tau;
}

double clamp_target_rate(double prev_target, double commanded, const ActuatorSpec& spec,
                         int dt_steps) {
  const double limit = spec.rate_fraction * spec.v_max * static_cast<double>(dt_steps);
  return prev_target + std::clamp(commanded - prev_target, -limit, limit);
}

double work_increment(const Vec6& tau_applied, const Vec6& qdot, double dt, int joint_count) {
  double w = 0.0;
  for (int i = 0; i < joint_count; ++i) w += std::max(0.0, tau_applied[i] * qdot[i]) * dt;
  return w;
}

CraneState step_dynamics(const CraneState& state, const Vec6& v_target, const CraneModel& model,
                         double dt, const StepExternal& ext) {
  if (!state.q.allFinite() || !state.qdot.allFinite() || !v_target.allFinite() ||
      !std::isfinite(state.pend_alpha) || !std::isfinite(state.pend_beta))
    throw std::runtime_error("non-finite crane state or target");

  const Vec3 tip_before = forward_kinematics(state.q, model).tip.translation();
  const Vec6 tau_gravity = gravity_forces(state.q, state.pend_alpha, state.pend_beta, model, ext);

  CraneState next = state;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = model.joints[i];
    const double target = std::clamp(v_target[i], -j.v_max, j.v_max);
    const double required = j.inertia_eff * (target - state.qdot[i]) / dt - tau_gravity[i];
    const double applied = std::clamp(required, -j.effort_max, j.effort_max);
    double vel = state.qdot[i] + (applied + tau_gravity[i]) * dt / j.inertia_eff;
    vel = std::clamp(vel, -j.v_max, j.v_max);
    double pos = state.q[i] + vel * dt;
    if (pos <= j.range_min) {
      pos = j.range_min;
      vel = 0.0;
    } else if (pos >= j.range_max) {
      pos = j.range_max;
      vel = 0.0;
    }
    next.q[i] = pos;
    next.qdot[i] = vel;
    next.v_target[i] = target;
    next.tau_applied[i] = applied;
  }

  // Pendulum: restoring from the in-plane gravity components, linear
  // damping, and a drive from the boom-tip acceleration expressed in
  // the slewed frame.
  const double arm = model.geometry.pendulum_length;
  const double damping = model.geometry.pendulum_damping;
  const Vec3 tip_after = forward_kinematics(next.q, model).tip.translation();
  const Vec3 tip_vel = (tip_after - tip_before) / dt;
  const Vec3 tip_acc = (tip_vel - state.tip_velocity) / dt;
  const Eigen::Matrix3d unyaw = Eigen::AngleAxisd(-next.q[0], Vec3::UnitZ()).toRotationMatrix();
  const Vec3 a_local = unyaw * tip_acc;
  const Vec3 g_local = unyaw * ext.gravity;

  const double ca = std::cos(state.pend_alpha), sa = std::sin(state.pend_alpha);
  const double cb = std::cos(state.pend_beta), sb = std::sin(state.pend_beta);
  const double alpha_acc =
      (g_local.x() * ca + g_local.z() * sa) / arm - damping * state.pend_alpha_rate - a_local.x() * ca / arm;
  const double beta_acc =
      (g_local.y() * cb + g_local.z() * sb) / arm - damping * state.pend_beta_rate - a_local.y() * cb / arm;

  next.pend_alpha_rate = state.pend_alpha_rate + alpha_acc * dt;
  next.pend_beta_rate = state.pend_beta_rate + beta_acc * dt;
  next.pend_alpha = state.pend_alpha + next.pend_alpha_rate * dt;
  next.pend_beta = state.pend_beta + next.pend_beta_rate * dt;
  next.tip_velocity = tip_vel;
  next.time = state.time + dt;
  return next;
}

}  // namespace cranerl
