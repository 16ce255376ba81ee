#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cranerl/trainer.hpp"

using namespace cranerl;

namespace {

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.ppo.num_envs = 2;
  cfg.ppo.horizon = 4;
  cfg.ppo.minibatch = 8;
  cfg.env.max_episode_sim_steps = 200;
  cfg.training_budget_sim_steps = 0;
  return cfg;
}

}  // namespace

TEST_CASE("rollouts are env-major with one bootstrap value per environment") {
  RunConfig cfg = tiny_config();
  Trainer trainer(cfg);
  const RolloutBatch batch = trainer.collect_once();

  REQUIRE(batch.num_envs == 2);
  REQUIRE(batch.horizon == 4);
  REQUIRE(batch.obs.cols() == 8);
  REQUIRE(batch.actions.cols() == 8);
  REQUIRE(batch.log_probs.size() == 8);
  REQUIRE(batch.bootstrap.size() == 2);

  // Column e*horizon holds environment e's first observation, which we
  // can replay from a twin environment on the same generator stream.
  const auto schedule = make_schedule(cfg);
  for (int e = 0; e < 2; ++e) {
    GraspEnv twin = make_env(cfg, TaskMode::training, 0);
    twin.rng() = Rng::substream(cfg.seed, 100 + static_cast<std::uint64_t>(e));
    twin.set_lesson(schedule[0]);
    const VecX first = twin.reset();
    REQUIRE((batch.obs.col(e * 4) - first).norm() == 0.0);
  }
}

TEST_CASE("identical seeds give bitwise-identical rollouts") {
  RunConfig cfg = tiny_config();
  Trainer a(cfg), b(cfg);
  const RolloutBatch ba = a.collect_once();
  const RolloutBatch bb = b.collect_once();
  CHECK((ba.obs - bb.obs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ba.actions - bb.actions).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ba.rewards - bb.rewards).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ba.log_probs - bb.log_probs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ba.dones == bb.dones);
  CHECK((ba.bootstrap - bb.bootstrap).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero budget checkpoints the initialized learner") {
  RunConfig cfg = tiny_config();
  Trainer trainer(cfg);
  trainer.run();
  CHECK(trainer.global_sim_steps() == 0);
  CHECK(trainer.update_log().empty());
  const TrainerSnapshot snap = trainer.snapshot();
  CHECK(snap.adam_step == 0);
  CHECK(snap.rng_streams.size() == 5);  // 2 env + 2 action + shuffle
}

TEST_CASE("snapshots restore the learner state") {
  RunConfig cfg = tiny_config();
  cfg.training_budget_sim_steps = 2 * 4 * 2 * 2;  // two rollouts
  Trainer trainer(cfg);
  trainer.run();
  const TrainerSnapshot snap = trainer.snapshot();

  Trainer resumed(cfg, snap);
  CHECK(resumed.global_sim_steps() == trainer.global_sim_steps());
  CHECK(resumed.lesson_index() == trainer.lesson_index());
  CHECK((resumed.params().mean_w - trainer.params().mean_w).cwiseAbs().maxCoeff() == 0.0);
  CHECK(resumed.stats().count() == trainer.stats().count());

  // Wrong environment count cannot adopt the generator streams.
  RunConfig other = cfg;
  other.ppo.num_envs = 3;
  CHECK_THROWS_AS(Trainer(other, snap), std::runtime_error);
}

TEST_CASE("observation statistics accumulate across rollouts") {
  RunConfig cfg = tiny_config();
  Trainer trainer(cfg);
  CHECK(trainer.stats().count() == 0.0);
  trainer.collect_once();
  const double after_one = trainer.stats().count();
  CHECK(after_one > 0.0);
  trainer.collect_once();
  CHECK(trainer.stats().count() > after_one);
}
