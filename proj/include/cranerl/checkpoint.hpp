#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cranerl/observation.hpp"
#include "cranerl/policy.hpp"
#include "cranerl/ppo.hpp"

namespace cranerl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Everything needed to resume or evaluate a training run: the exact
// configuration text, parameters and optimizer moments, observation
// statistics, curriculum position, and all generator streams.
// The binary layout is little-endian with 64-bit floats; a load/save
// cycle reproduces the file byte for byte.
struct TrainerSnapshot {
  std::string config_json;
  std::uint64_t global_sim_steps = 0;
  std::uint64_t episodes = 0;
  int lesson_index = 0;
  std::vector<std::uint8_t> window_outcomes;
  RunningStats stats{kObsPerFrame};
  std::vector<std::array<std::uint64_t, 4>> rng_streams;
  std::uint64_t adam_step = 0;
  PolicyParameters params;
  PolicyParameters adam_m;
  PolicyParameters adam_v;
};

void save_checkpoint(const std::filesystem::path& path, const TrainerSnapshot& snapshot);

TrainerSnapshot load_checkpoint(const std::filesystem::path& path);

}  // namespace cranerl
