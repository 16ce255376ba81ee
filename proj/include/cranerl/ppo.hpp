#pragma once

#include <cstdint>
#include <vector>

#include "cranerl/policy.hpp"
#include "cranerl/rng.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

struct PpoConfig {
  double clip_epsilon = 0.3;
  double entropy_coef = 0.01;
  double gae_lambda = 0.95;
  double discount = 0.995;
  double learning_rate = 1e-3;
  int num_envs = 8;
  int horizon = 1024;        // decisions per environment per rollout
  int minibatch = 2048;
  int epochs = 3;
  double value_coef = 0.5;
  double max_grad_norm = 5.0;
  double init_log_std = 0.0;
  bool normalize_advantages = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

// Linear decay from the base rate to zero at max_steps.
inline double lr_at(std::uint64_t step, double base_rate, std::uint64_t max_steps) {
  if (max_steps == 0) return base_rate;
  const double frac = 1.0 - static_cast<double>(step) / static_cast<double>(max_steps);
  return base_rate * std::max(0.0, frac);
}

// Experience gathered env-major: transitions of environment e occupy
// columns [e*horizon, (e+1)*horizon). Actions are the pre-clamp
// Gaussian draws the log-probs were computed at.
struct RolloutBatch {
  MatX obs;
  MatX actions;
  VecX log_probs;
  VecX rewards;
  VecX values;
  std::vector<uint8_t> dones;
  VecX bootstrap;  // one value per environment
  VecX advantages;
  VecX returns;
  int num_envs = 0;
  int horizon = 0;
};

void compute_batch_gae(RolloutBatch& batch, double gamma, double lambda);

struct AdamState {
  PolicyParameters m;
  PolicyParameters v;
  std::uint64_t step = 0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int minibatches = 0;
  bool aborted = false;
};

struct Minibatch {
  MatX obs;
  MatX actions;
  VecX old_log_probs;
  VecX advantages;
  VecX returns;
};

struct MinibatchLoss {
  double policy_loss = 0.0;
  double value_loss = 0.0;  // raw MSE, before the value coefficient
  double entropy = 0.0;
  double total = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  PolicyParameters grads;
};

// Loss of one minibatch and its exact gradient:
// total = -mean(min(rho*A, clip(rho)*A)) + c_v*MSE(v, returns) - beta*H.
MinibatchLoss ppo_minibatch_loss(const PolicyParameters& params, const Minibatch& mb,
                                 const PpoConfig& cfg);

// Clipped-surrogate update with exact backprop gradients, global
// gradient-norm clipping and bias-corrected adaptive-moment steps.
// Advantages are normalized once over the whole batch. A non-finite
// loss aborts the update and leaves the parameters untouched for the
// remaining minibatches.
UpdateStats ppo_update(PolicyParameters& params, AdamState& adam, const RolloutBatch& batch,
                       const PpoConfig& cfg, double lr, Rng& shuffle_rng);

}  // namespace cranerl
