#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "cranerl/curriculum.hpp"
#include "cranerl/env.hpp"
#include "cranerl/ppo.hpp"

namespace cranerl {

// Everything a run needs, with defaults that reproduce the reference
// experiment. An empty config file is a valid run description.
struct RunConfig {
  std::string mode = "plain";  // or "energy_optimized"
  std::uint64_t seed = 1;
  std::uint64_t training_budget_sim_steps = 2'000'000;
  std::string output_dir = "runs/default";

  CraneModel model;
  WorldConfig world;
  RewardConfig reward;
  EnvConfig env;
  CurriculumConfig curriculum;
  PpoConfig ppo;

  RewardMode reward_mode() const {
    return mode == "energy_optimized" ? RewardMode::energy_optimized : RewardMode::plain;
  }
};

nlohmann::json config_to_json(const RunConfig& cfg);

// Applies the document on top of the defaults. Unknown keys anywhere
// in the tree are rejected with their full path.
RunConfig config_from_json(const nlohmann::json& doc);

// Empty or missing path gives the default configuration.
RunConfig load_config(const std::filesystem::path& path);

std::string canonical_config_json(const RunConfig& cfg);

// Environment factory wiring the configured mode and reward together.
GraspEnv make_env(const RunConfig& cfg, TaskMode mode, std::uint64_t seed);

std::vector<LessonSpec> make_schedule(const RunConfig& cfg);

}  // namespace cranerl
