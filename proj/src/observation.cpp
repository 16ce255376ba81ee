#include "cranerl/observation.hpp"

#include <cmath>
#include <stdexcept>

namespace cranerl {

VecX observation_frame(const LogState& log, const ObservationNoise& noise, const CraneState& crane) {
  VecX f(kObsPerFrame);
  const Vec3 observed = log.com + noise.position_offset;
  const double heading = log.heading + noise.heading_offset;
  f[0] = observed.x();
  f[1] = observed.y();
  f[2] = observed.z();
  f[3] = std::sin(2.0 * heading);
  f[4] = std::cos(2.0 * heading);
  for (int i = 0; i < kNumJoints; ++i) {
    f[5 + 3 * i + 0] = crane.q[i];
    f[5 + 3 * i + 1] = crane.qdot[i];
    f[5 + 3 * i + 2] = crane.tau_applied[i];
  }
  if (!f.allFinite()) throw std::runtime_error("non-finite observation frame");
  return f;
}

void RunningStats::update(const VecX& x) {
  if (mean_.size() == 0) {
    mean_ = VecX::Zero(x.size());
    m2_ = VecX::Zero(x.size());
  }
  count_ += 1.0;
  const VecX delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta.cwiseProduct(x - mean_);
}

RunningStats RunningStats::combined(const RunningStats& a, const RunningStats& b) {
  if (a.count_ == 0.0) return b;
  if (b.count_ == 0.0) return a;
  RunningStats out(static_cast<int>(a.mean_.size()));
  out.count_ = a.count_ + b.count_;
  const VecX delta = b.mean_ - a.mean_;
  out.mean_ = a.mean_ + delta * (b.count_ / out.count_);
  out.m2_ = a.m2_ + b.m2_ + delta.cwiseProduct(delta) * (a.count_ * b.count_ / out.count_);
  return out;
}

VecX RunningStats::variance() const {
  if (count_ < 2.0) return VecX::Zero(mean_.size());
  return m2_ / count_;
}

VecX normalize_frame(const VecX& frame, const RunningStats& stats, double eps_std, double clip) {
  const VecX sd = stats.variance().cwiseSqrt().cwiseMax(eps_std);
  VecX out = (frame - stats.mean()).cwiseQuotient(sd);
  return out.cwiseMax(-clip).cwiseMin(clip);
}

void FrameStack::reset(const VecX& frame) {
  frames_.clear();
  for (int i = 0; i < depth_; ++i) frames_.push_back(frame);
}

void FrameStack::push(const VecX& frame) {
  frames_.push_front(frame);
  while (static_cast<int>(frames_.size()) > depth_) frames_.pop_back();
}

VecX FrameStack::stacked() const {
  const int n = static_cast<int>(frames_.front().size());
  VecX out(depth_ * n);
  for (int i = 0; i < depth_; ++i) out.segment(i * n, n) = frames_[i];
  return out;
}

}  // namespace cranerl
