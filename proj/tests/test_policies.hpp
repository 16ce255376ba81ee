#pragma once

// Hand-built policies and task setups used by the evaluation and CLI
// tests: zero weights with a biased mean head give a state-independent
// action, and a low starting pose over a point region makes that
// constant action a guaranteed grasp.

#include <cmath>

#include "cranerl/config.hpp"
#include "cranerl/policy.hpp"

namespace testpolicies {

using namespace cranerl;

// Constant-action policy: mean = tanh(bias) regardless of the input.
inline PolicyParameters constant_policy(const Vec6& action) {
  Rng rng(1);
  PolicyParameters p = zeros_like(init_policy(MlpShape{}, 0.0, rng));
  for (int i = 0; i < kNumJoints; ++i) p.mean_b[i] = std::atanh(action[i]);
  return p;
}

// Ground-lesson task where closing while slowly raising the boom is a
// guaranteed grasp: the grapple starts enclosing the log position and
// a deep claw window tolerates the rise.
inline RunConfig trivial_grasp_config() {
  RunConfig cfg;
  cfg.env.nominal_q << 0.0, 0.44, -1.2, 0.3, 0.0, 0.35;
  cfg.env.reset_perturbation = 0.0;
  cfg.env.max_episode_sim_steps = 600;
  cfg.world.capture.claw_depth = 0.6;
  cfg.curriculum.initial_height = 0.5;
  cfg.curriculum.initial_lessons = 1;
  cfg.curriculum.descend_interval = 0.5;
  cfg.curriculum.seed_r = 4.39;
  cfg.curriculum.seed_theta = 0.0;
  cfg.curriculum.seed_halfwidth_r = 0.0;
  cfg.curriculum.seed_halfwidth_theta = 0.0;
  cfg.curriculum.target_region = Region{4.39, 4.39, 0.0, 0.0};
  return cfg;
}

inline Vec6 close_and_rise_action() {
  Vec6 a;
  a << 0.0, 0.1, 0.0, 0.0, 0.0, -0.9;
  return a;
}

}  // namespace testpolicies
