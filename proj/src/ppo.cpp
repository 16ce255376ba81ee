#include "cranerl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cranerl/gae.hpp"

namespace cranerl {

void compute_batch_gae(RolloutBatch& batch, double gamma, double lambda) {
  const Eigen::Index n = batch.rewards.size();
  batch.advantages.resize(n);
  batch.returns.resize(n);
  for (int e = 0; e < batch.num_envs; ++e) {
    const Eigen::Index lo = static_cast<Eigen::Index>(e) * batch.horizon;
    VecX adv, ret;
    std::vector<uint8_t> dones(batch.dones.begin() + lo, batch.dones.begin() + lo + batch.horizon);
    compute_gae(batch.rewards.segment(lo, batch.horizon), batch.values.segment(lo, batch.horizon),
                dones, batch.bootstrap[e], gamma, lambda, adv, ret);
    batch.advantages.segment(lo, batch.horizon) = adv;
    batch.returns.segment(lo, batch.horizon) = ret;
  }
}

MinibatchLoss ppo_minibatch_loss(const PolicyParameters& params, const Minibatch& mb,
                                 const PpoConfig& cfg) {
  const Eigen::Index count = mb.obs.cols();
  const int act_dim = params.shape.actions;
  const double inv_count = 1.0 / static_cast<double>(count);

  const ForwardCache cache = forward(params, mb.obs);
  const VecX log_std = params.log_std();
  const VecX inv_var = (-2.0 * log_std).array().exp().matrix();

  MinibatchLoss out;
  VecX logp_grad(count);  // d(policy loss)/d(new log-prob) per sample
  for (Eigen::Index k = 0; k < count; ++k) {
    const double new_logp = gaussian_log_prob(cache.mean.col(k), log_std, mb.actions.col(k));
    const double log_ratio = new_logp - mb.old_log_probs[k];
    const double ratio = std::exp(log_ratio);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
    const double s1 = ratio * mb.advantages[k];
    const double s2 = clipped * mb.advantages[k];
    out.policy_loss -= std::min(s1, s2);
    logp_grad[k] = (s1 <= s2) ? -mb.advantages[k] * ratio : 0.0;
    if (std::abs(ratio - 1.0) > cfg.clip_epsilon) out.clip_fraction += 1.0;
    out.approx_kl += (ratio - 1.0) - log_ratio;
  }
  out.policy_loss *= inv_count;
  out.clip_fraction *= inv_count;
  out.approx_kl *= inv_count;
  logp_grad *= inv_count;

  const VecX value_err = cache.value.transpose() - mb.returns;
  out.value_loss = value_err.squaredNorm() * inv_count;
  out.entropy = gaussian_entropy(log_std);
  out.total = out.policy_loss + cfg.value_coef * out.value_loss - cfg.entropy_coef * out.entropy;

  MatX d_mean(act_dim, count);
  VecX d_log_std = VecX::Constant(act_dim, -cfg.entropy_coef);
  for (Eigen::Index k = 0; k < count; ++k) {
    const VecX diff = mb.actions.col(k) - cache.mean.col(k);
    d_mean.col(k) = logp_grad[k] * diff.cwiseProduct(inv_var);
    d_log_std += logp_grad[k] * (diff.cwiseAbs2().cwiseProduct(inv_var) - VecX::Ones(act_dim));
  }
  const Eigen::RowVectorXd d_value = (2.0 * cfg.value_coef * inv_count) * value_err.transpose();

  out.grads = backward(params, cache, d_mean, d_value, d_log_std);
  return out;
}

namespace {

void adam_step(PolicyParameters& params, PolicyParameters& grads, AdamState& adam,
               const PpoConfig& cfg, double lr) {
  auto p_refs = tensor_refs(params);
  auto g_refs = tensor_refs(grads);
  auto m_refs = tensor_refs(adam.m);
  auto v_refs = tensor_refs(adam.v);

  double norm_sq = 0.0;
  for (const auto& g : g_refs) norm_sq += Eigen::Map<const VecX>(g.data, g.size).squaredNorm();
  const double norm = std::sqrt(norm_sq);
  const double scale = (cfg.max_grad_norm > 0.0 && norm > cfg.max_grad_norm)
                           ? cfg.max_grad_norm / norm
                           : 1.0;

  adam.step += 1;
  const double bias1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam.step));
  const double bias2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam.step));

  for (size_t i = 0; i < p_refs.size(); ++i) {
    Eigen::Map<VecX> p(p_refs[i].data, p_refs[i].size);
    Eigen::Map<VecX> g(g_refs[i].data, g_refs[i].size);
    Eigen::Map<VecX> m(m_refs[i].data, m_refs[i].size);
    Eigen::Map<VecX> v(v_refs[i].data, v_refs[i].size);
    g *= scale;
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double m_hat = m[k] / bias1;
      const double v_hat = v[k] / bias2;
      p[k] -= lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    }
  }
}

}  // namespace

UpdateStats ppo_update(PolicyParameters& params, AdamState& adam, const RolloutBatch& batch,
                       const PpoConfig& cfg, double lr, Rng& shuffle_rng) {
  UpdateStats stats;
  const Eigen::Index n = batch.obs.cols();
  const int act_dim = params.shape.actions;

  VecX adv = batch.advantages;
  if (cfg.normalize_advantages && n > 0) {
    const double mean = adv.mean();
    const double sd = std::sqrt((adv.array() - mean).square().sum() / static_cast<double>(n));
    adv = (adv.array() - mean).matrix() / (sd + 1e-8);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);

  Minibatch mb;
  for (int epoch = 0; epoch < cfg.epochs && !stats.aborted; ++epoch) {
    for (Eigen::Index i = n - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.below(static_cast<std::uint64_t>(i) + 1)]);

    for (Eigen::Index start = 0; start < n && !stats.aborted; start += cfg.minibatch) {
      const Eigen::Index count = std::min<Eigen::Index>(cfg.minibatch, n - start);
      mb.obs.resize(params.shape.input, count);
      mb.actions.resize(act_dim, count);
      mb.old_log_probs.resize(count);
      mb.advantages.resize(count);
      mb.returns.resize(count);
      for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index idx = order[start + k];
        mb.obs.col(k) = batch.obs.col(idx);
        mb.actions.col(k) = batch.actions.col(idx);
        mb.old_log_probs[k] = batch.log_probs[idx];
        mb.advantages[k] = adv[idx];
        mb.returns[k] = batch.returns[idx];
      }

      MinibatchLoss loss = ppo_minibatch_loss(params, mb, cfg);
      if (!std::isfinite(loss.total)) {
        stats.aborted = true;
        break;
      }
      adam_step(params, loss.grads, adam, cfg, lr);

      stats.policy_loss += loss.policy_loss;
      stats.value_loss += loss.value_loss;
      stats.entropy += loss.entropy;
      stats.clip_fraction += loss.clip_fraction;
      stats.approx_kl += loss.approx_kl;
      stats.minibatches += 1;
    }
  }

  if (stats.minibatches > 0) {
    const double inv = 1.0 / stats.minibatches;
    stats.policy_loss *= inv;
    stats.value_loss *= inv;
    stats.entropy *= inv;
    stats.clip_fraction *= inv;
    stats.approx_kl *= inv;
  }
  return stats;
}

}  // namespace cranerl
