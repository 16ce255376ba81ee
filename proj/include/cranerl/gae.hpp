#pragma once

#include <cstdint>
#include <vector>

#include "cranerl/types.hpp"

namespace cranerl {

// Generalized advantage estimation over one trajectory segment.
// delta_t = r_t + gamma * v_{t+1} * (1 - done_t) - v_t, accumulated
// backward with factor gamma * lambda; v_{T} is the bootstrap value.
inline void compute_gae(const VecX& rewards, const VecX& values, const std::vector<uint8_t>& dones,
                        double bootstrap, double gamma, double lambda, VecX& advantages,
                        VecX& returns) {
  const Eigen::Index n = rewards.size();
  advantages.resize(n);
  returns.resize(n);
  double carry = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double nonterminal = dones[t] ? 0.0 : 1.0;
    const double next_value = (t == n - 1) ? bootstrap : values[t + 1];
    const double delta = rewards[t] + gamma * next_value * nonterminal - values[t];
    carry = delta + gamma * lambda * nonterminal * carry;
    advantages[t] = carry;
  }
  returns = advantages + values;
}

}  // namespace cranerl
