#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cranerl/config.hpp"
#include "cranerl/env.hpp"

using namespace cranerl;

namespace {

// Task with the grapple starting in grasping range of a fixed log.
RunConfig easy_config() {
  RunConfig cfg;
  cfg.env.nominal_q << 0.0, 0.5, -1.2, 0.3, 0.0, 1.2;
  cfg.env.reset_perturbation = 0.0;
  return cfg;
}

LessonSpec point_lesson(double plane_height, double r, double theta) {
  LessonSpec lesson;
  lesson.plane_height = plane_height;
  lesson.region = Region{r, r, theta, theta};
  lesson.plane_collision_enabled = plane_height == 0.0;
  return lesson;
}

Vec6 action(double q1, double q2, double q3, double q4, double q5, double q6) {
  Vec6 a;
  a << q1, q2, q3, q4, q5, q6;
  return a;
}

// Close the claws on the log below, then lift until the episode ends.
StepResult scripted_grasp(GraspEnv& env, std::vector<RewardBreakdown>* trail = nullptr) {
  StepResult r;
  for (int k = 0; k < 900 && !env.done(); ++k) {
    const bool holding = env.log().attached;
    r = env.step(holding ? action(0, 1, 0, 0, 0, -1) : action(0, 0, 0, 0, 0, -1));
    if (trail) trail->push_back(r.breakdown);
  }
  return r;
}

}  // namespace

TEST_CASE("zero perturbation resets to the exact nominal configuration") {
  RunConfig cfg = easy_config();
  GraspEnv env = make_env(cfg, TaskMode::training, 5);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();
  CHECK((env.crane().q - cfg.env.nominal_q).norm() == 0.0);
  env.reset();
  CHECK((env.crane().q - cfg.env.nominal_q).norm() == 0.0);
}

TEST_CASE("equal seeds give identical resets") {
  RunConfig cfg;
  GraspEnv a = make_env(cfg, TaskMode::training, 123);
  GraspEnv b = make_env(cfg, TaskMode::training, 123);
  const LessonSpec lesson = make_schedule(cfg)[0];
  a.set_lesson(lesson);
  b.set_lesson(lesson);
  const VecX oa = a.reset();
  const VecX ob = b.reset();
  CHECK((oa - ob).norm() == 0.0);
  CHECK((a.crane().q - b.crane().q).norm() == 0.0);
  CHECK((a.log().com - b.log().com).norm() == 0.0);
}

TEST_CASE("reset perturbations stay inside their band and fill it") {
  RunConfig cfg;
  GraspEnv env = make_env(cfg, TaskMode::training, 77);
  env.set_lesson(make_schedule(cfg)[0]);
  Vec6 lo = Vec6::Constant(1e300), hi = Vec6::Constant(-1e300);
  for (int k = 0; k < 3000; ++k) {
    env.reset();
    for (int i = 0; i < kNumJoints; ++i) {
      const double d = env.crane().q[i] - cfg.env.nominal_q[i];
      lo[i] = std::min(lo[i], d);
      hi[i] = std::max(hi[i], d);
    }
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = cfg.model.joints[i];
    const double band = cfg.env.reset_perturbation * (j.range_max - j.range_min);
    CHECK(lo[i] >= -band - 1e-12);
    CHECK(hi[i] <= band + 1e-12);
    CHECK(lo[i] < -0.9 * band);
    CHECK(hi[i] > 0.9 * band);
  }
}

TEST_CASE("zero action from rest holds the crane with guidance-only reward") {
  RunConfig cfg = easy_config();
  GraspEnv env = make_env(cfg, TaskMode::training, 3);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();
  const Vec6 q0 = env.crane().q;
  const StepResult r = env.step(Vec6::Zero());
  CHECK((env.crane().q - q0).norm() <= 1e-12);
  CHECK(r.breakdown.success == 0.0);
  CHECK(r.reward == r.breakdown.guidance);
  CHECK_FALSE(r.done);
  CHECK(env.energy() == 0.0);
}

TEST_CASE("idle episodes time out at the step budget") {
  RunConfig cfg = easy_config();
  cfg.env.max_episode_sim_steps = 400;
  GraspEnv env = make_env(cfg, TaskMode::training, 3);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();
  StepResult r;
  int decisions = 0;
  while (!env.done()) {
    r = env.step(Vec6::Zero());
    ++decisions;
  }
  CHECK(decisions == 200);
  CHECK(env.sim_steps() == 400);
  CHECK(r.breakdown.cause == TerminationCause::timeout);
  CHECK(r.breakdown.success == 0.0);
  CHECK_THROWS_AS(env.step(Vec6::Zero()), std::logic_error);
}

TEST_CASE("scripted close-and-lift reaches success with frozen energy") {
  RunConfig cfg = easy_config();
  GraspEnv env = make_env(cfg, TaskMode::training, 11);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();

  std::vector<RewardBreakdown> trail;
  const StepResult last = scripted_grasp(env, &trail);

  REQUIRE(last.done);
  CHECK(last.breakdown.cause == TerminationCause::success);
  CHECK(last.breakdown.success == doctest::Approx(1.0));  // plain mode
  CHECK(env.log().attached);
  CHECK(env.log().com.z() >= 0.5 + cfg.world.capture.lift_threshold);
  CHECK(env.success_time() > 0.0);

  // The energy meter is nonnegative, nondecreasing, and frozen from
  // grasp initiation onward.
  bool frozen = false;
  double prev = 0.0, frozen_value = -1.0;
  for (const auto& b : trail) {
    REQUIRE(b.energy_at_grasp >= prev - 1e-12);
    prev = b.energy_at_grasp;
  }
  for (size_t k = 1; k < trail.size(); ++k) {
    if (frozen) REQUIRE(trail[k].energy_at_grasp == frozen_value);
    if (!frozen && env.grasp_initiated() && trail[k].energy_at_grasp == trail[k - 1].energy_at_grasp &&
        k > 3) {
      frozen = true;
      frozen_value = trail[k].energy_at_grasp;
    }
  }
  CHECK(env.grasp_initiated());
}

TEST_CASE("optimized mode scales the terminal reward inversely with energy") {
  RunConfig cfg = easy_config();
  cfg.mode = "energy_optimized";
  cfg.reward.e_ref = 5000.0;
  GraspEnv env = make_env(cfg, TaskMode::training, 11);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();

  // Wasteful detour with open claws: lift the boom, then settle back
  // over the log, so real work accrues before grasp initiation.
  for (int k = 0; k < 40 && !env.done(); ++k) env.step(action(0, 1, 0, 0, 0, 0));
  while (!env.done()) {
    const double above = env.grapple().center.z() - (0.5 + cfg.world.log.radius);
    if (above < cfg.world.capture.claw_depth - 0.05) break;
    env.step(action(0, -0.5, 0, 0, 0, 0));
  }
  REQUIRE(env.energy() > 0.0);
  REQUIRE_FALSE(env.grasp_initiated());

  const StepResult last = scripted_grasp(env);
  REQUIRE(last.breakdown.cause == TerminationCause::success);
  const double e = last.breakdown.energy_at_grasp;
  REQUIRE(e > 0.0);
  CHECK(last.breakdown.success == doctest::Approx(5000.0 / (5000.0 + e)).epsilon(1e-12));
  CHECK(last.breakdown.success < 1.0);
  CHECK(last.breakdown.success > 0.0);

  // Of two successful episodes, the lower-energy one earns more.
  GraspEnv lean = make_env(cfg, TaskMode::training, 11);
  lean.set_lesson(point_lesson(0.5, 4.39, 0.0));
  lean.reset();
  const StepResult lean_last = scripted_grasp(lean);
  REQUIRE(lean_last.breakdown.cause == TerminationCause::success);
  REQUIRE(lean_last.breakdown.energy_at_grasp < e);
  CHECK(lean_last.breakdown.success > last.breakdown.success);
}

TEST_CASE("success reward formula") {
  RewardConfig plain;
  plain.mode = RewardMode::plain;
  CHECK(success_reward(0.0, plain) == 1.0);
  CHECK(success_reward(123456.0, plain) == 1.0);

  RewardConfig opt;
  opt.mode = RewardMode::energy_optimized;
  CHECK(success_reward(0.0, opt) == doctest::Approx(1.0));
  CHECK(success_reward(opt.e_ref, opt) == doctest::Approx(0.5));
  CHECK(success_reward(10.0, opt) > success_reward(20.0, opt));  // strictly decreasing
}

TEST_CASE("guidance reward shape") {
  RewardConfig cfg;
  // Far away it vanishes.
  CHECK(guidance_reward(50.0, 0.0, 0.8, 1.0, 0.0, 2.0, 0.0, 0.0, cfg) <=
        cfg.guidance_coef * 1e-20);
  // Telescope at a range stop kills it.
  CHECK(guidance_reward(0.5, 0.0, 0.8, 0.0, 0.0, 2.0, 0.0, 0.0, cfg) == 0.0);
  CHECK(guidance_reward(0.5, 0.0, 0.8, 2.0, 0.0, 2.0, 0.0, 0.0, cfg) == 0.0);
  // Misalignment beyond the gate kills it.
  CHECK(guidance_reward(0.5, 0.0, 0.8, 1.0, 0.0, 2.0, 0.0, 0.8, cfg) == 0.0);
  // Folded alignment: a heading off by pi is aligned again.
  CHECK(guidance_reward(0.5, 0.0, 0.8, 1.0, 0.0, 2.0, 0.0, M_PI, cfg) > 0.0);
  // At d = d0, aligned, slow telescope inside the near zone.
  const double expected = cfg.guidance_coef * std::exp(-1.0) * (1.0 + cfg.slow_bonus);
  RewardConfig near = cfg;
  near.near_distance = 1.5;
  CHECK(guidance_reward(1.0, 0.0, 0.8, 1.0, 0.0, 2.0, 0.3, 0.3, near) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("termination priority") {
  CHECK(check_termination(true, true, true, 5000, 2000) == TerminationCause::success);
  CHECK(check_termination(false, true, true, 5000, 2000) == TerminationCause::effort_at_limit);
  CHECK(check_termination(false, false, true, 5000, 2000) == TerminationCause::bunk_collision);
  CHECK(check_termination(false, false, false, 2000, 2000) == TerminationCause::timeout);
  CHECK(check_termination(false, false, false, 1999, 2000) == TerminationCause::running);
}

TEST_CASE("driving a boom into its stop at full effort terminates with zero return") {
  RunConfig cfg;  // default start pose
  GraspEnv env = make_env(cfg, TaskMode::training, 9);
  env.set_lesson(make_schedule(cfg)[0]);
  env.reset();
  StepResult r;
  int decisions = 0;
  while (!env.done() && decisions < 500) {
    r = env.step(action(0, 1, 0, 0, 0, 0));
    ++decisions;
  }
  REQUIRE(env.done());
  CHECK(r.breakdown.cause == TerminationCause::effort_at_limit);
  CHECK(r.breakdown.success == 0.0);
  CHECK(env.crane().q[1] == cfg.model.joints[1].range_max);
}

TEST_CASE("lowering the claws into the bunk terminates the episode") {
  RunConfig cfg;  // grapple starts above the bunk
  GraspEnv env = make_env(cfg, TaskMode::training, 9);
  env.set_lesson(make_schedule(cfg)[0]);
  env.reset();
  StepResult r;
  int decisions = 0;
  while (!env.done() && decisions < 500) {
    r = env.step(action(0, -1, 0, 0, 0, 0));
    ++decisions;
  }
  REQUIRE(env.done());
  CHECK(r.breakdown.cause == TerminationCause::bunk_collision);
  CHECK(r.breakdown.success == 0.0);
}

TEST_CASE("observations are stacked, normalized and clipped") {
  RunConfig cfg;
  GraspEnv env = make_env(cfg, TaskMode::training, 9);
  env.set_lesson(make_schedule(cfg)[0]);
  VecX obs = env.reset();
  REQUIRE(obs.size() == kStackedObsDim);
  Rng rng(5);
  for (int k = 0; k < 40 && !env.done(); ++k) {
    Vec6 a;
    for (int i = 0; i < kNumJoints; ++i) a[i] = rng.uniform(-1.0, 1.0);
    obs = env.step(a).observation;
    REQUIRE(obs.size() == kStackedObsDim);
    REQUIRE(obs.cwiseAbs().maxCoeff() <= 5.0);
  }
}

TEST_CASE("servo targets move by at most the per-step rate limit") {
  RunConfig cfg;
  GraspEnv env = make_env(cfg, TaskMode::training, 13);
  env.set_lesson(make_schedule(cfg)[0]);
  env.set_target_tracing(true);
  env.reset();
  Rng rng(6);
  for (int k = 0; k < 200 && !env.done(); ++k) {
    Vec6 a;
    for (int i = 0; i < kNumJoints; ++i) a[i] = rng.uniform(-1.0, 1.0);
    env.step(a);
  }
  const auto& trace = env.target_trace();
  REQUIRE(trace.size() >= 100);
  for (size_t k = 1; k < trace.size(); ++k)
    for (int i = 0; i < kNumJoints; ++i)
      REQUIRE(std::abs(trace[k][i] - trace[k - 1][i]) <=
              cfg.model.joints[i].v_max / 30.0 + 1e-12);
}

TEST_CASE("attached log follows the grapple and releases on reopen") {
  RunConfig cfg = easy_config();
  GraspEnv env = make_env(cfg, TaskMode::training, 21);
  env.set_lesson(point_lesson(0.5, 4.39, 0.0));
  env.reset();
  // Close until attached.
  int guard = 0;
  while (!env.log().attached && guard++ < 400 && !env.done())
    env.step(action(0, 0, 0, 0, 0, -1));
  REQUIRE(env.log().attached);
  const Vec3 grip = env.log().com - env.grapple().center;
  // Slew a little: the log must ride along.
  for (int k = 0; k < 20 && !env.done(); ++k) env.step(action(0.5, 0, 0, 0, 0, -1));
  const Vec3 grip_after = env.log().com - env.grapple().center;
  CHECK((grip_after.norm() - grip.norm()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(env.log().com_velocity.norm() > 0.0);

  // Reopen: the log drops back to its support height.
  for (int k = 0; k < 200 && env.log().attached && !env.done(); ++k)
    env.step(action(0, 0, 0, 0, 0, 1));
  if (!env.done()) {
    CHECK_FALSE(env.log().attached);
    CHECK(env.log().com.z() == doctest::Approx(0.5 + cfg.world.log.radius).epsilon(1e-9));
  }
}
