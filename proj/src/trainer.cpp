#include "cranerl/trainer.hpp"

#include <algorithm>
#include <stdexcept>

namespace cranerl {

namespace {
// Stream indices carved out of the run seed.
constexpr std::uint64_t kEnvStream = 100;
constexpr std::uint64_t kActionStream = 200;
constexpr std::uint64_t kShuffleStream = 300;
constexpr std::uint64_t kInitStream = 400;
}  // namespace

Trainer::Trainer(const RunConfig& cfg)
    : cfg_(cfg),
      config_json_(canonical_config_json(cfg)),
      schedule_(make_schedule(cfg)),
      tracker_(cfg.curriculum.window, static_cast<int>(make_schedule(cfg).size())),
      shuffle_rng_(Rng::substream(cfg.seed, kShuffleStream)) {
  Rng init_rng = Rng::substream(cfg_.seed, kInitStream);
  params_ = init_policy(MlpShape{}, cfg_.ppo.init_log_std, init_rng);
  adam_.m = zeros_like(params_);
  adam_.v = zeros_like(params_);
  init_envs();
}

Trainer::Trainer(const RunConfig& cfg, const TrainerSnapshot& snapshot)
    : cfg_(cfg),
      config_json_(snapshot.config_json),
      schedule_(make_schedule(cfg)),
      tracker_(cfg.curriculum.window, static_cast<int>(make_schedule(cfg).size())),
      shuffle_rng_(Rng::substream(cfg.seed, kShuffleStream)) {
  params_ = snapshot.params;
  adam_.m = snapshot.adam_m;
  adam_.v = snapshot.adam_v;
  adam_.step = snapshot.adam_step;
  master_stats_ = snapshot.stats;
  global_sim_steps_ = snapshot.global_sim_steps;
  episodes_ = snapshot.episodes;
  tracker_.restore(std::min<int>(snapshot.lesson_index, static_cast<int>(schedule_.size()) - 1),
                   snapshot.window_outcomes);
  init_envs();
  const std::size_t expected = 2 * envs_.size() + 1;
  if (snapshot.rng_streams.size() == expected) {
    for (std::size_t e = 0; e < envs_.size(); ++e) {
      envs_[e].rng().set_state(snapshot.rng_streams[e]);
      action_rngs_[e].set_state(snapshot.rng_streams[envs_.size() + e]);
    }
    shuffle_rng_.set_state(snapshot.rng_streams.back());
  } else if (!snapshot.rng_streams.empty()) {
    throw std::runtime_error("checkpoint generator stream count does not match num_envs");
  }
  // Episodes in flight at save time are not resumed; every environment
  // restarts at the restored lesson.
  for (std::size_t e = 0; e < envs_.size(); ++e) {
    envs_[e].set_lesson(schedule_[tracker_.lesson_index()]);
    envs_[e].set_stats_snapshot(master_stats_);
    current_obs_[e] = envs_[e].reset();
  }
}

void Trainer::init_envs() {
  const int n = cfg_.ppo.num_envs;
  if (n < 1) throw std::invalid_argument("need at least one environment");
  envs_.reserve(n);
  current_obs_.resize(n);
  for (int e = 0; e < n; ++e) {
    envs_.push_back(make_env(cfg_, TaskMode::training, 0));
    envs_[e].rng() = Rng::substream(cfg_.seed, kEnvStream + static_cast<std::uint64_t>(e));
    action_rngs_.push_back(Rng::substream(cfg_.seed, kActionStream + static_cast<std::uint64_t>(e)));
    envs_[e].set_lesson(schedule_[tracker_.lesson_index()]);
    envs_[e].set_stats_snapshot(master_stats_);
    current_obs_[e] = envs_[e].reset();
  }
}

void Trainer::finish_episode(int env_index, const StepResult& result) {
  GraspEnv& env = envs_[env_index];
  episodes_ += 1;
  const bool success = result.breakdown.cause == TerminationCause::success;

  EpisodeLogRow row;
  row.index = episodes_;
  row.end_step = global_sim_steps_;
  row.lesson = env.lesson().index;
  row.success = success ? 1 : 0;
  row.episode_return = env.episode_return();
  row.energy = result.breakdown.energy_at_grasp;
  row.sim_steps = env.sim_steps();
  row.cause = to_string(result.breakdown.cause);
  episode_log_.push_back(std::move(row));

  recent_returns_.push_back(env.episode_return());
  if (recent_returns_.size() > 20) recent_returns_.pop_front();
  recent_outcomes_.push_back(success ? 1 : 0);
  if (recent_outcomes_.size() > 20) recent_outcomes_.pop_front();

  tracker_.record(success, env.lesson().advancement_threshold);
}

void Trainer::collect_rollout(RolloutBatch& batch) {
  const int n = cfg_.ppo.num_envs;
  const int h = cfg_.ppo.horizon;
  const Eigen::Index total = static_cast<Eigen::Index>(n) * h;

  batch.num_envs = n;
  batch.horizon = h;
  batch.obs.resize(kStackedObsDim, total);
  batch.actions.resize(params_.shape.actions, total);
  batch.log_probs.resize(total);
  batch.rewards.resize(total);
  batch.values.resize(total);
  batch.dones.assign(total, 0);
  batch.bootstrap.resize(n);

  const VecX log_std = params_.log_std();
  MatX obs_now(kStackedObsDim, n);

  for (int t = 0; t < h; ++t) {
    for (int e = 0; e < n; ++e) obs_now.col(e) = current_obs_[e];
    const ForwardCache out = forward(params_, obs_now);

    for (int e = 0; e < n; ++e) {
      const Eigen::Index idx = static_cast<Eigen::Index>(e) * h + t;
      const ActionSample sample = sample_action(out.mean.col(e), log_std, action_rngs_[e]);

      batch.obs.col(idx) = current_obs_[e];
      batch.actions.col(idx) = sample.action;
      batch.log_probs[idx] = sample.log_prob;
      batch.values[idx] = out.value[e];

      Vec6 act;
      for (int i = 0; i < kNumJoints; ++i) act[i] = std::clamp(sample.action[i], -1.0, 1.0);
      StepResult r;
      try {
        r = envs_[e].step(act);
      } catch (const std::exception& ex) {
        throw std::runtime_error("environment " + std::to_string(e) + ": " + ex.what());
      }
      global_sim_steps_ += kSimStepsPerDecision;

      batch.rewards[idx] = r.reward;
      batch.dones[idx] = r.done ? 1 : 0;
      if (r.done) {
        finish_episode(e, r);
        envs_[e].set_lesson(schedule_[tracker_.lesson_index()]);
        current_obs_[e] = envs_[e].reset();
      } else {
        current_obs_[e] = r.observation;
      }
    }
  }

  for (int e = 0; e < n; ++e) obs_now.col(e) = current_obs_[e];
  const ForwardCache tail = forward(params_, obs_now);
  for (int e = 0; e < n; ++e) batch.bootstrap[e] = tail.value[e];

  // Merge the per-environment observation statistics in a fixed order.
  for (int e = 0; e < n; ++e)
    master_stats_ = RunningStats::combined(master_stats_, envs_[e].stats_delta());
  for (int e = 0; e < n; ++e) {
    envs_[e].set_stats_snapshot(master_stats_);
    envs_[e].clear_stats_delta();
  }
}

RolloutBatch Trainer::collect_once() {
  RolloutBatch batch;
  collect_rollout(batch);
  return batch;
}

void Trainer::run() {
  RolloutBatch batch;
  while (global_sim_steps_ < cfg_.training_budget_sim_steps) {
    collect_rollout(batch);
    compute_batch_gae(batch, cfg_.ppo.discount, cfg_.ppo.gae_lambda);
    const double lr =
        lr_at(global_sim_steps_, cfg_.ppo.learning_rate, cfg_.training_budget_sim_steps);
    const UpdateStats stats = ppo_update(params_, adam_, batch, cfg_.ppo, lr, shuffle_rng_);

    UpdateLogRow row;
    row.step = global_sim_steps_;
    row.lesson = tracker_.lesson_index();
    row.plane_height = schedule_[tracker_.lesson_index()].plane_height;
    double sum = 0.0;
    for (double v : recent_returns_) sum += v;
    row.mean_return = recent_returns_.empty() ? 0.0 : sum / recent_returns_.size();
    int hits = 0;
    for (int v : recent_outcomes_) hits += v;
    row.success_rate = recent_outcomes_.empty() ? 0.0 : static_cast<double>(hits) / recent_outcomes_.size();
    row.policy_loss = stats.policy_loss;
    row.value_loss = stats.value_loss;
    row.entropy = stats.entropy;
    row.clip_fraction = stats.clip_fraction;
    row.approx_kl = stats.approx_kl;
    row.learning_rate = lr;
    row.episodes = episodes_;
    update_log_.push_back(row);
  }
}

TrainerSnapshot Trainer::snapshot() const {
  TrainerSnapshot snap;
  snap.config_json = config_json_;
  snap.global_sim_steps = global_sim_steps_;
  snap.episodes = episodes_;
  snap.lesson_index = tracker_.lesson_index();
  snap.window_outcomes = tracker_.outcomes();
  snap.stats = master_stats_;
  for (const auto& env : envs_) snap.rng_streams.push_back(env.rng().state());
  for (const auto& rng : action_rngs_) snap.rng_streams.push_back(rng.state());
  snap.rng_streams.push_back(shuffle_rng_.state());
  snap.adam_step = adam_.step;
  snap.params = params_;
  snap.adam_m = adam_.m;
  snap.adam_v = adam_.v;
  return snap;
}

}  // namespace cranerl
