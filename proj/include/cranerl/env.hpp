#pragma once

#include <cstdint>
#include <optional>

#include "cranerl/curriculum.hpp"
#include "cranerl/dynamics.hpp"
#include "cranerl/observation.hpp"
#include "cranerl/world.hpp"

namespace cranerl {

enum class RewardMode { plain, energy_optimized };

enum class TerminationCause { running, success, effort_at_limit, bunk_collision, timeout };

const char* to_string(TerminationCause cause);

struct RewardConfig {
  RewardMode mode = RewardMode::plain;
  double r_base = 1.0;
  double e_ref = 50e3;                      // J, midpoint of the inverse-energy scale
  double guidance_coef = 5e-4;              // per decision
  double guidance_distance_scale = 1.0;     // m
  double near_distance = 0.5;               // m, slow-telescope bonus zone
  double slow_bonus = 1.0;
  double max_orientation_dev = 30.0 * M_PI / 180.0;
  double eps_std = 1e-8;
  double obs_clip = 5.0;
};

struct EnvConfig {
  // Grapple parked 2.5 m above the load bunk behind the vehicle.
  Vec6 nominal_q = (Vec6() << M_PI, 1.3288, -1.887, 0.1, 0.0, 1.2).finished();
  double reset_perturbation = 0.02;  // fraction of each joint range
  int max_episode_sim_steps = 2000;
};

struct WorldConfig {
  LogParams log;
  Obb bunk{Vec3(-2.5, 0.0, 0.75), Vec3(1.5, 1.2, 0.75), 0.0};
  CaptureSpec capture;
  PerturbationConfig perturbation;
};

// Terminal reward, inversely scaled with the consumed energy in the
// optimized mode and flat otherwise.
double success_reward(double energy, const RewardConfig& cfg);

// Dense shaping term: exponential in the tip-to-log distance, boosted
// for a slow telescope near the log, zeroed on grapple/log
// misalignment or a telescope at its range stop.
double guidance_reward(double tip_distance, double telescope_speed, double telescope_v_max,
                       double telescope_q, double telescope_min, double telescope_max,
                       double grapple_yaw, double log_heading, const RewardConfig& cfg);

TerminationCause check_termination(bool success, bool effort_at_limit, bool bunk_collision,
                                   int sim_steps, int max_sim_steps);

struct RewardBreakdown {
  double guidance = 0.0;
  double success = 0.0;
  double energy_at_grasp = 0.0;
  TerminationCause cause = TerminationCause::running;
};

struct StepResult {
  VecX observation;
  double reward = 0.0;
  bool done = false;
  RewardBreakdown breakdown;
};

// One grasping episode environment. The controller acts at half the
// simulation rate; each step() runs two 20 ms substeps with the servo
// targets rate-clamped at every substep. Instances are self-contained
// and safe to run side by side.
class GraspEnv {
 public:
  GraspEnv(const CraneModel& model, const WorldConfig& world, const RewardConfig& reward,
           const EnvConfig& env, TaskMode mode, std::uint64_t seed);

  void set_lesson(const LessonSpec& lesson) { lesson_ = lesson; }
  const LessonSpec& lesson() const { return lesson_; }

  // Normalization statistics: training environments update a local
  // delta on top of a shared snapshot; evaluation freezes them.
  void set_stats_snapshot(const RunningStats& snapshot);
  const RunningStats& stats_delta() const { return stats_delta_; }
  void clear_stats_delta() { stats_delta_ = RunningStats(kObsPerFrame); }

  VecX reset();
  StepResult step(const Vec6& action);

  bool done() const { return done_; }
  int sim_steps() const { return sim_steps_; }
  double episode_return() const { return episode_return_; }
  double energy() const { return energy_; }
  bool grasp_initiated() const { return grasp_initiated_; }
  double success_time() const { return success_time_; }
  const CraneState& crane() const { return crane_; }
  const LogState& log() const { return log_; }
  const CraneModel& model() const { return model_; }
  Vec3 tip_position() const;
  GrappleFrame grapple() const;
  const CollisionReport& last_collisions() const { return last_collisions_; }
  TaskMode task_mode() const { return mode_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  // Records the servo target at every simulation substep, for audits
  // of the per-step rate limit.
  void set_target_tracing(bool on) { trace_targets_ = on; }
  const std::vector<Vec6>& target_trace() const { return target_trace_; }

 private:
  VecX observe_and_stack(bool reset_history);

  CraneModel model_;          // as configured
  CraneModel model_effective_;  // with any mass perturbation applied
  WorldConfig world_;
  RewardConfig reward_;
  EnvConfig env_;
  TaskMode mode_;
  Rng rng_;

  LessonSpec lesson_;
  CraneState crane_;
  LogState log_;
  ObservationNoise noise_;
  ChassisState chassis_;
  Vec3 base_gravity_ = Vec3(0.0, 0.0, -kGravityAccel);
  Vec3 grip_offset_ = Vec3::Zero();  // log C.o.M in the grapple frame at attach
  double grip_heading_offset_ = 0.0;

  RunningStats stats_snapshot_{kObsPerFrame};
  RunningStats stats_delta_{kObsPerFrame};
  FrameStack stack_{kFrameStackDepth};

  int sim_steps_ = 0;
  double energy_ = 0.0;
  bool grasp_initiated_ = false;
  bool done_ = true;
  bool success_latch_ = false;
  bool effort_latch_ = false;
  bool bunk_latch_ = false;
  double success_time_ = 0.0;
  double episode_return_ = 0.0;
  CollisionReport last_collisions_;
  bool trace_targets_ = false;
  std::vector<Vec6> target_trace_;
};

}  // namespace cranerl
