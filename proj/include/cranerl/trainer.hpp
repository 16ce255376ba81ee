#pragma once

#include <deque>
#include <string>
#include <vector>

#include "cranerl/checkpoint.hpp"
#include "cranerl/config.hpp"
#include "cranerl/curriculum.hpp"
#include "cranerl/env.hpp"
#include "cranerl/ppo.hpp"

namespace cranerl {

struct UpdateLogRow {
  std::uint64_t step = 0;
  int lesson = 0;
  double plane_height = 0.0;
  double mean_return = 0.0;
  double success_rate = 0.0;  // over the trailing episode window
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double learning_rate = 0.0;
  std::uint64_t episodes = 0;
};

struct EpisodeLogRow {
  std::uint64_t index = 0;
  std::uint64_t end_step = 0;
  int lesson = 0;
  int success = 0;
  double episode_return = 0.0;
  double energy = 0.0;
  int sim_steps = 0;
  std::string cause;
};

// Collect/update loop over a bank of lockstepped environments sharing
// one policy snapshot per rollout. Everything is sequential and
// seeded, so a run is reproducible bit for bit.
class Trainer {
 public:
  explicit Trainer(const RunConfig& cfg);
  Trainer(const RunConfig& cfg, const TrainerSnapshot& snapshot);

  // Runs until the global sim-step counter reaches the configured
  // training budget.
  void run();

  // One rollout of horizon decisions per environment, env-major:
  // columns [e*horizon, (e+1)*horizon) belong to environment e.
  RolloutBatch collect_once();

  TrainerSnapshot snapshot() const;

  const std::vector<UpdateLogRow>& update_log() const { return update_log_; }
  const std::vector<EpisodeLogRow>& episode_log() const { return episode_log_; }
  const PolicyParameters& params() const { return params_; }
  const RunningStats& stats() const { return master_stats_; }
  int lesson_index() const { return tracker_.lesson_index(); }
  const std::vector<LessonSpec>& schedule() const { return schedule_; }
  std::uint64_t global_sim_steps() const { return global_sim_steps_; }
  std::uint64_t episodes() const { return episodes_; }

 private:
  void init_envs();
  void collect_rollout(RolloutBatch& batch);
  void finish_episode(int env_index, const StepResult& result);

  RunConfig cfg_;
  std::string config_json_;
  std::vector<LessonSpec> schedule_;
  ProgressTracker tracker_;
  std::vector<GraspEnv> envs_;
  std::vector<Rng> action_rngs_;
  Rng shuffle_rng_;
  PolicyParameters params_;
  AdamState adam_;
  RunningStats master_stats_{kObsPerFrame};
  std::vector<VecX> current_obs_;

  std::uint64_t global_sim_steps_ = 0;
  std::uint64_t episodes_ = 0;
  std::deque<double> recent_returns_;
  std::deque<int> recent_outcomes_;
  std::vector<UpdateLogRow> update_log_;
  std::vector<EpisodeLogRow> episode_log_;
};

}  // namespace cranerl
