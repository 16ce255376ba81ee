#pragma once

#include <string>
#include <vector>

#include "cranerl/rng.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

struct MlpShape {
  int input = kStackedObsDim;
  std::vector<int> hidden{256, 256, 256};
  int actions = kNumJoints;
};

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

// Gaussian policy with a tanh-squashed mean head and a separate value
// network over the same inputs. The log standard deviation is a free
// state-independent parameter. Keeping the critic on its own trunk
// means value fitting cannot drag the action distribution around.
struct PolicyParameters {
  MlpShape shape;

  std::vector<MatX> actor_w;
  std::vector<VecX> actor_b;
  MatX mean_w;
  VecX mean_b;
  VecX log_std_raw;

  std::vector<MatX> critic_w;
  std::vector<VecX> critic_b;
  MatX value_w;
  VecX value_b;

  VecX log_std() const { return log_std_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax); }
};

// Named view of one parameter tensor, used by the optimizer, the
// gradient clipper and the checkpoint writer. Order is stable.
struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index size;
  Eigen::Index rows;
  Eigen::Index cols;
};

std::vector<TensorRef> tensor_refs(PolicyParameters& params);

PolicyParameters zeros_like(const PolicyParameters& params);

// Orthogonal initialization, sqrt(2) gain on hidden layers and small
// head gains, with the given initial log-std.
PolicyParameters init_policy(const MlpShape& shape, double init_log_std, Rng& rng);

// Activations kept for the manual backward pass. Columns are samples.
struct ForwardCache {
  MatX input;
  std::vector<MatX> actor_h;
  std::vector<MatX> critic_h;
  MatX mean;          // after tanh
  Eigen::RowVectorXd value;
};

ForwardCache forward(const PolicyParameters& params, const MatX& obs);

// Convenience single-observation pass.
void policy_forward(const PolicyParameters& params, const VecX& obs, VecX& mean, VecX& log_std,
                    double& value);

// Gradient of a scalar loss given its partials w.r.t. the squashed
// mean, the value output, and the clamped log-std. Exact
// backpropagation; the log-std clamp passes gradient only inside its
// range.
PolicyParameters backward(const PolicyParameters& params, const ForwardCache& cache,
                          const MatX& d_mean, const Eigen::RowVectorXd& d_value,
                          const VecX& d_log_std);

struct ActionSample {
  VecX action;  // pre-clamp Gaussian draw
  double log_prob;
};

ActionSample sample_action(const VecX& mean, const VecX& log_std, Rng& rng);

double gaussian_log_prob(const VecX& mean, const VecX& log_std, const VecX& action);

// Differential entropy of the diagonal Gaussian head.
double gaussian_entropy(const VecX& log_std);

}  // namespace cranerl
