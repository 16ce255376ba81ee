#pragma once

#include <deque>

#include "cranerl/dynamics.hpp"
#include "cranerl/types.hpp"
#include "cranerl/world.hpp"

namespace cranerl {

// One 23-value observation frame: observed log C.o.M (3), heading as
// (sin 2*psi, cos 2*psi) to respect the cylinder symmetry (2), then
// position, speed and applied effort per joint (18).
VecX observation_frame(const LogState& log, const ObservationNoise& noise, const CraneState& crane);

// Welford-style running mean/variance per dimension. Instances merge
// by moment addition, so per-environment deltas can be combined with
// a shared snapshot at rollout boundaries.
class RunningStats {
 public:
  RunningStats() = default;
  explicit RunningStats(int dim) : mean_(VecX::Zero(dim)), m2_(VecX::Zero(dim)) {}

  void update(const VecX& x);
  static RunningStats combined(const RunningStats& a, const RunningStats& b);

  double count() const { return count_; }
  const VecX& mean() const { return mean_; }
  // Population variance; zero until two samples have been seen.
  VecX variance() const;
  int dim() const { return static_cast<int>(mean_.size()); }

  VecX raw_m2() const { return m2_; }
  void restore(double count, const VecX& mean, const VecX& m2) {
    count_ = count;
    mean_ = mean;
    m2_ = m2;
  }

 private:
  double count_ = 0.0;
  VecX mean_;
  VecX m2_;
};

// (x - mean) / max(std, eps), clipped to [-clip, clip].
VecX normalize_frame(const VecX& frame, const RunningStats& stats, double eps_std, double clip);

// Fixed-depth history of normalized frames, flattened newest-first.
class FrameStack {
 public:
  explicit FrameStack(int depth = kFrameStackDepth) : depth_(depth) {}

  void reset(const VecX& frame);
  void push(const VecX& frame);
  VecX stacked() const;
  int depth() const { return depth_; }

 private:
  int depth_;
  std::deque<VecX> frames_;
};

}  // namespace cranerl
