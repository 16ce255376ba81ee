#include "cranerl/env.hpp"

#include <cmath>
#include <stdexcept>

namespace cranerl {

const char* to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::running: return "running";
    case TerminationCause::success: return "success";
    case TerminationCause::effort_at_limit: return "effort_at_limit";
    case TerminationCause::bunk_collision: return "bunk_collision";
    case TerminationCause::timeout: return "timeout";
  }
  return "unknown";
}

double success_reward(double energy, const RewardConfig& cfg) {
  if (cfg.mode == RewardMode::plain) return cfg.r_base;
  return cfg.r_base * cfg.e_ref / (cfg.e_ref + energy);
}

double guidance_reward(double tip_distance, double telescope_speed, double telescope_v_max,
                       double telescope_q, double telescope_min, double telescope_max,
                       double grapple_yaw, double log_heading, const RewardConfig& cfg) {
  if (telescope_q <= telescope_min || telescope_q >= telescope_max) return 0.0;
  // Orientation deviation between the claw sweep-plane normal and the
  // log axis, folded to [0, pi/2] by the cylinder symmetry.
  const double ndotu = std::abs(std::cos(grapple_yaw - log_heading));
  const double deviation = std::acos(std::min(1.0, ndotu));
  if (deviation > cfg.max_orientation_dev) return 0.0;
  double speed_factor = 1.0;
  if (tip_distance < cfg.near_distance)
    speed_factor = 1.0 + cfg.slow_bonus * (1.0 - std::abs(telescope_speed) / telescope_v_max);
  return cfg.guidance_coef * std::exp(-tip_distance / cfg.guidance_distance_scale) * speed_factor;
}

TerminationCause check_termination(bool success, bool effort_at_limit, bool bunk_collision,
                                   int sim_steps, int max_sim_steps) {
  if (success) return TerminationCause::success;
  if (effort_at_limit) return TerminationCause::effort_at_limit;
  if (bunk_collision) return TerminationCause::bunk_collision;
  if (sim_steps >= max_sim_steps) return TerminationCause::timeout;
  return TerminationCause::running;
}

GraspEnv::GraspEnv(const CraneModel& model, const WorldConfig& world, const RewardConfig& reward,
                   const EnvConfig& env, TaskMode mode, std::uint64_t seed)
    : model_(model), world_(world), reward_(reward), env_(env), mode_(mode), rng_(seed) {
  model_.validate();
  model_effective_ = world_.perturbation.mass_scale == 1.0
                         ? model_
                         : scale_link_masses(model_, world_.perturbation.mass_scale);
  base_gravity_ = slope_gravity(world_.perturbation.slope_grade);
  lesson_.region = Region{2.0, 3.0, -0.3, 0.3};
}

void GraspEnv::set_stats_snapshot(const RunningStats& snapshot) { stats_snapshot_ = snapshot; }

Vec3 GraspEnv::tip_position() const {
  return forward_kinematics(crane_.q, model_).tip.translation();
}

GrappleFrame GraspEnv::grapple() const {
  return grapple_pose(crane_.q, crane_.pend_alpha, crane_.pend_beta, model_);
}

VecX GraspEnv::observe_and_stack(bool reset_history) {
  const VecX frame = observation_frame(log_, noise_, crane_);
  if (mode_ == TaskMode::training) stats_delta_.update(frame);
  const RunningStats view = mode_ == TaskMode::training
                                ? RunningStats::combined(stats_snapshot_, stats_delta_)
                                : stats_snapshot_;
  const VecX normalized = normalize_frame(frame, view, reward_.eps_std, reward_.obs_clip);
  if (reset_history)
    stack_.reset(normalized);
  else
    stack_.push(normalized);
  return stack_.stacked();
}

VecX GraspEnv::reset() {
  crane_ = CraneState{};
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = model_.joints[i];
    const double span = j.range_max - j.range_min;
    const double q = env_.nominal_q[i] + rng_.uniform(-1.0, 1.0) * env_.reset_perturbation * span;
    crane_.q[i] = std::clamp(q, j.range_min, j.range_max);
  }

  log_ = sample_log(lesson_.region, lesson_.plane_height, mode_, world_.log, rng_);
  noise_ = sample_observation_noise(world_.perturbation, rng_);
  chassis_ = ChassisState{};
  grip_offset_ = Vec3::Zero();
  grip_heading_offset_ = 0.0;

  sim_steps_ = 0;
  energy_ = 0.0;
  grasp_initiated_ = false;
  success_latch_ = effort_latch_ = bunk_latch_ = false;
  success_time_ = 0.0;
  episode_return_ = 0.0;
  last_collisions_ = CollisionReport{};
  target_trace_.clear();
  if (trace_targets_) target_trace_.push_back(crane_.v_target);
  done_ = false;
  return observe_and_stack(true);
}

StepResult GraspEnv::step(const Vec6& action) {
  if (done_) throw std::logic_error("step() called on a finished episode");

  Vec6 commanded;
  for (int i = 0; i < kNumJoints; ++i)
    commanded[i] = std::clamp(action[i], -1.0, 1.0) * model_.joints[i].v_max;

  for (int sub = 0; sub < kSimStepsPerDecision; ++sub) {
    Vec6 target;
    for (int i = 0; i < kNumJoints; ++i)
      target[i] = clamp_target_rate(crane_.v_target[i], commanded[i], model_.joints[i]);
    if (trace_targets_) target_trace_.push_back(target);

    StepExternal ext;
    ext.payload_mass = log_.attached ? log_.mass : 0.0;
    ext.gravity = world_.perturbation.base_compliance_enabled
                      ? chassis_gravity(chassis_, base_gravity_)
                      : base_gravity_;
    crane_ = step_dynamics(crane_, target, model_effective_, kSimDt, ext);
    ++sim_steps_;

    const GrappleFrame grap =
        grapple_pose(crane_.q, crane_.pend_alpha, crane_.pend_beta, model_);
    const double gap = crane_.q[5];
    const GraspPhase phase = detect_grasp(grap, gap, log_, world_.capture);

    // Attachment is sticky: the log rides the grapple until the claws
    // reopen past the release threshold.
    if (!log_.attached && phase == GraspPhase::attached) {
      log_.attached = true;
      const Eigen::Matrix3d unyaw =
          Eigen::AngleAxisd(-grap.yaw, Vec3::UnitZ()).toRotationMatrix();
      grip_offset_ = unyaw * (log_.com - grap.center);
      grip_heading_offset_ = log_.heading - grap.yaw;
    } else if (log_.attached) {
      const double release =
          2.0 * log_.radius + world_.capture.grip_slack + world_.capture.reopen_slack;
      if (gap > release) {
        log_.attached = false;
        log_.com.z() = log_.support_height + log_.radius;
        log_.com_velocity = Vec3::Zero();
      }
    }
    if (log_.attached) {
      const Eigen::Matrix3d yaw = Eigen::AngleAxisd(grap.yaw, Vec3::UnitZ()).toRotationMatrix();
      const Vec3 new_com = grap.center + yaw * grip_offset_;
      log_.com_velocity = (new_com - log_.com) / kSimDt;
      log_.com = new_com;
      log_.heading = normalize_heading(grap.yaw + grip_heading_offset_);
    }

    if (!grasp_initiated_ && phase != GraspPhase::none && crane_.v_target[5] < -1e-9)
      grasp_initiated_ = true;
    if (!grasp_initiated_) energy_ += work_increment(crane_.tau_applied, crane_.qdot, kSimDt);

    if (world_.perturbation.base_compliance_enabled) {
      const LinkComs coms =
          link_coms(crane_.q, crane_.pend_alpha, crane_.pend_beta, model_effective_);
      double pitch_moment = 0.0, roll_moment = 0.0;
      const double g_mag = -base_gravity_.z();
      for (int i = 0; i < kNumJoints; ++i) {
        pitch_moment += model_effective_.geometry.link_mass[i] * g_mag * coms.com[i].x();
        roll_moment += model_effective_.geometry.link_mass[i] * g_mag * coms.com[i].y();
      }
      if (log_.attached) {
        pitch_moment += log_.mass * g_mag * coms.grapple_center.x();
        roll_moment += log_.mass * g_mag * coms.grapple_center.y();
      }
      step_chassis(chassis_, pitch_moment, roll_moment, world_.perturbation, kSimDt);
    }

    const CraneFrames frames = forward_kinematics(crane_.q, model_);
    const auto capsules = crane_capsules(frames, grap, gap, model_, world_.capture);
    const CollisionReport report =
        check_collisions(capsules, world_.bunk, lesson_.plane_height, lesson_.plane_collision_enabled);
    last_collisions_ = report;
    if (report.bunk) bunk_latch_ = true;

    for (int i = 0; i < 3; ++i) {
      const auto& j = model_.joints[i];
      const bool at_stop = crane_.q[i] <= j.range_min || crane_.q[i] >= j.range_max;
      if (at_stop && std::abs(crane_.tau_applied[i]) >= j.effort_max * (1.0 - 1e-12))
        effort_latch_ = true;
    }

    if (!success_latch_ && check_success(log_, world_.capture)) {
      success_latch_ = true;
      success_time_ = crane_.time;
    }
  }

  StepResult result;
  result.observation = observe_and_stack(false);

  const Vec3 tip = forward_kinematics(crane_.q, model_).tip.translation();
  const double d = (tip - log_.com).norm();
  const auto& q4 = model_.joints[3];
  result.breakdown.guidance =
      guidance_reward(d, crane_.qdot[3], q4.v_max, crane_.q[3], q4.range_min, q4.range_max,
                      crane_.q[0] + crane_.q[4], log_.heading, reward_);

  result.breakdown.cause = check_termination(success_latch_, effort_latch_, bunk_latch_,
                                             sim_steps_, env_.max_episode_sim_steps);
  result.breakdown.energy_at_grasp = energy_;
  if (result.breakdown.cause == TerminationCause::success)
    result.breakdown.success = success_reward(energy_, reward_);

  result.reward = result.breakdown.guidance + result.breakdown.success;
  result.done = result.breakdown.cause != TerminationCause::running;
  done_ = result.done;
  episode_return_ += result.reward;
  return result;
}

}  // namespace cranerl
