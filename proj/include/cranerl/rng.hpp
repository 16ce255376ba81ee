#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "cranerl/types.hpp"

namespace cranerl {

// xoshiro256++ with splitmix64 seeding. Standard-library engines and
// distributions are implementation-defined, which breaks bitwise
// reproducibility of runs across toolchains; this generator and the
// samplers below are fully specified and their state serializes as
// four 64-bit words.
class Rng {
 public:
  Rng() : Rng(0x9e3779b97f4a7c15ull) {}

  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) {
      x += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      w = z ^ (z >> 31);
    }
  }

  // Derives an independent stream, e.g. one per environment or episode.
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed * 0x2545f4914f6cdd1dull + stream * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, recomputed per call so the generator carries no hidden cache.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Uniformly distributed point on the sphere of the given radius.
  Vec3 on_sphere(double radius) {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec3 p(s * std::cos(phi), s * std::sin(phi), z);
    return radius * (p / p.norm());
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  std::array<std::uint64_t, 4> state() const { return state_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace cranerl
