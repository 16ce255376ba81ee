#include "cranerl/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace cranerl {

namespace {

MatX orthogonal(int rows, int cols, double gain, Rng& rng) {
  const int big = std::max(rows, cols), small = std::min(rows, cols);
  MatX a(big, small);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
  Eigen::HouseholderQR<MatX> qr(a);
  MatX q = qr.householderQ() * MatX::Identity(big, small);
  const MatX r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
  for (int j = 0; j < small; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  MatX w = (rows >= cols) ? q : MatX(q.transpose());
  return gain * w;
}

MatX mlp_trunk(const std::vector<MatX>& w, const std::vector<VecX>& b, const MatX& x,
               std::vector<MatX>* cache) {
  MatX h = x;
  for (size_t l = 0; l < w.size(); ++l) {
    h = ((w[l] * h).colwise() + b[l]).array().tanh().matrix();
    if (cache) cache->push_back(h);
  }
  return h;
}

// Backward through one trunk: d_top is the gradient at the last
// hidden activation. Returns the gradient at the input.
MatX trunk_backward(const std::vector<MatX>& w, const std::vector<MatX>& h, const MatX& x,
                    MatX d_top, std::vector<MatX>& dw, std::vector<VecX>& db) {
  for (int l = static_cast<int>(w.size()) - 1; l >= 0; --l) {
    const MatX dz = d_top.cwiseProduct((1.0 - h[l].array().square()).matrix());
    const MatX& below = (l == 0) ? x : h[l - 1];
    dw[l] = dz * below.transpose();
    db[l] = dz.rowwise().sum();
    d_top = w[l].transpose() * dz;
  }
  return d_top;
}

}  // namespace

std::vector<TensorRef> tensor_refs(PolicyParameters& p) {
  std::vector<TensorRef> refs;
  auto add = [&refs](const std::string& name, MatX& m) {
    refs.push_back({name, m.data(), m.size(), m.rows(), m.cols()});
  };
  auto addv = [&refs](const std::string& name, VecX& v) {
    refs.push_back({name, v.data(), v.size(), v.size(), 1});
  };
  for (size_t l = 0; l < p.actor_w.size(); ++l) {
    add("actor_w" + std::to_string(l), p.actor_w[l]);
    addv("actor_b" + std::to_string(l), p.actor_b[l]);
  }
  add("mean_w", p.mean_w);
  addv("mean_b", p.mean_b);
  addv("log_std", p.log_std_raw);
  for (size_t l = 0; l < p.critic_w.size(); ++l) {
    add("critic_w" + std::to_string(l), p.critic_w[l]);
    addv("critic_b" + std::to_string(l), p.critic_b[l]);
  }
  add("value_w", p.value_w);
  addv("value_b", p.value_b);
  return refs;
}

PolicyParameters zeros_like(const PolicyParameters& params) {
  PolicyParameters z;
  z.shape = params.shape;
  for (const auto& w : params.actor_w) z.actor_w.push_back(MatX::Zero(w.rows(), w.cols()));
  for (const auto& b : params.actor_b) z.actor_b.push_back(VecX::Zero(b.size()));
  z.mean_w = MatX::Zero(params.mean_w.rows(), params.mean_w.cols());
  z.mean_b = VecX::Zero(params.mean_b.size());
  z.log_std_raw = VecX::Zero(params.log_std_raw.size());
  for (const auto& w : params.critic_w) z.critic_w.push_back(MatX::Zero(w.rows(), w.cols()));
  for (const auto& b : params.critic_b) z.critic_b.push_back(VecX::Zero(b.size()));
  z.value_w = MatX::Zero(params.value_w.rows(), params.value_w.cols());
  z.value_b = VecX::Zero(params.value_b.size());
  return z;
}

PolicyParameters init_policy(const MlpShape& shape, double init_log_std, Rng& rng) {
  PolicyParameters p;
  p.shape = shape;
  auto build_trunk = [&](std::vector<MatX>& ws, std::vector<VecX>& bs) {
    int below = shape.input;
    for (int width : shape.hidden) {
      ws.push_back(orthogonal(width, below, std::sqrt(2.0), rng));
      bs.push_back(VecX::Zero(width));
      below = width;
    }
    return below;
  };
  const int top_a = build_trunk(p.actor_w, p.actor_b);
  p.mean_w = orthogonal(shape.actions, top_a, 0.01, rng);
  p.mean_b = VecX::Zero(shape.actions);
  p.log_std_raw = VecX::Constant(shape.actions, init_log_std);
  const int top_c = build_trunk(p.critic_w, p.critic_b);
  p.value_w = orthogonal(1, top_c, 1.0, rng);
  p.value_b = VecX::Zero(1);
  return p;
}

ForwardCache forward(const PolicyParameters& p, const MatX& obs) {
  if (obs.rows() != p.shape.input) throw std::invalid_argument("observation dimension mismatch");
  ForwardCache c;
  c.input = obs;
  const MatX ha = mlp_trunk(p.actor_w, p.actor_b, obs, &c.actor_h);
  c.mean = ((p.mean_w * ha).colwise() + p.mean_b).array().tanh().matrix();
  const MatX hc = mlp_trunk(p.critic_w, p.critic_b, obs, &c.critic_h);
  c.value = ((p.value_w * hc).colwise() + p.value_b).row(0);
  return c;
}

void policy_forward(const PolicyParameters& p, const VecX& obs, VecX& mean, VecX& log_std,
                    double& value) {
  const ForwardCache c = forward(p, obs);
  mean = c.mean.col(0);
  log_std = p.log_std();
  value = c.value[0];
}

PolicyParameters backward(const PolicyParameters& p, const ForwardCache& c, const MatX& d_mean,
                          const Eigen::RowVectorXd& d_value, const VecX& d_log_std) {
  PolicyParameters g = zeros_like(p);

  const MatX d_mean_pre = d_mean.cwiseProduct((1.0 - c.mean.array().square()).matrix());
  const MatX& top_a = c.actor_h.back();
  g.mean_w = d_mean_pre * top_a.transpose();
  g.mean_b = d_mean_pre.rowwise().sum();
  trunk_backward(p.actor_w, c.actor_h, c.input, p.mean_w.transpose() * d_mean_pre, g.actor_w,
                 g.actor_b);

  const MatX& top_c = c.critic_h.back();
  g.value_w = d_value * top_c.transpose();
  g.value_b = VecX::Constant(1, d_value.sum());
  trunk_backward(p.critic_w, c.critic_h, c.input, p.value_w.transpose() * d_value, g.critic_w,
                 g.critic_b);

  for (Eigen::Index i = 0; i < p.log_std_raw.size(); ++i) {
    const bool inside = p.log_std_raw[i] > kLogStdMin && p.log_std_raw[i] < kLogStdMax;
    g.log_std_raw[i] = inside ? d_log_std[i] : 0.0;
  }
  return g;
}

ActionSample sample_action(const VecX& mean, const VecX& log_std, Rng& rng) {
  ActionSample s;
  s.action = VecX(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i)
    s.action[i] = mean[i] + std::exp(log_std[i]) * rng.normal();
  s.log_prob = gaussian_log_prob(mean, log_std, s.action);
  return s;
}

double gaussian_log_prob(const VecX& mean, const VecX& log_std, const VecX& action) {
  double lp = -0.5 * static_cast<double>(mean.size()) * std::log(2.0 * M_PI);
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i];
  }
  return lp;
}

double gaussian_entropy(const VecX& log_std) {
  return log_std.sum() + 0.5 * static_cast<double>(log_std.size()) * std::log(2.0 * M_PI * M_E);
}

}  // namespace cranerl
