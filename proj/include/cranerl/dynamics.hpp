#pragma once

#include "cranerl/geometry.hpp"
#include "cranerl/kinematics.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

// Full mechanical state of the crane between steps. tip_velocity is
// the finite-difference boom-tip velocity from the previous step; it
// feeds the pendulum drive term.
struct CraneState {
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
  Vec6 v_target = Vec6::Zero();
  Vec6 tau_applied = Vec6::Zero();
  double pend_alpha = 0.0;
  double pend_beta = 0.0;
  double pend_alpha_rate = 0.0;
  double pend_beta_rate = 0.0;
  Vec3 tip_velocity = Vec3::Zero();
  double time = 0.0;
};

struct StepExternal {
  double payload_mass = 0.0;
  Vec3 gravity = Vec3(0.0, 0.0, -kGravityAccel);
};

// Total gravitational potential of the links plus any payload hanging
// at the grapple centre.
double potential_energy(const Vec6& q, double alpha, double beta, const CraneModel& model,
                        const StepExternal& ext);

// Generalized gravity effort per joint, -dU/dq_i, via the transposed
// position Jacobian of each link C.o.M.
Vec6 gravity_forces(const Vec6& q, double alpha, double beta, const CraneModel& model,
                    const StepExternal& ext);

// One semi-implicit Euler step of the per-joint velocity servos and
// the passive pendulum. Effort saturates at +-effort_max, speed at
// +-v_max, and joints stop inelastically at their range limits.
CraneState step_dynamics(const CraneState& state, const Vec6& v_target, const CraneModel& model,
                         double dt, const StepExternal& ext);

// Moves the servo target toward the commanded speed by at most
// rate_fraction * v_max per simulation step.
double clamp_target_rate(double prev_target, double commanded, const ActuatorSpec& spec,
                         int dt_steps = 1);

// Positive actuator work over one step, counted for the first
// joint_count joints only and with no credit for braking.
double work_increment(const Vec6& tau_applied, const Vec6& qdot, double dt, int joint_count = 4);

}  // namespace cranerl
