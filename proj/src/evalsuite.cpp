#include "cranerl/evalsuite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace cranerl {

namespace {

EpisodeRecord run_episode(const RunConfig& cfg, const PolicyParameters& params,
                          const RunningStats& frozen_stats, const LessonSpec& lesson,
                          const PerturbationConfig& perturbation, std::uint64_t seed,
                          std::uint64_t episode_index, bool record_trace) {
  RunConfig episode_cfg = cfg;
  episode_cfg.world.perturbation = perturbation;
  GraspEnv env = make_env(episode_cfg, TaskMode::evaluation, 0);
  env.rng() = Rng::substream(seed, 0x5eed0000ull + episode_index);
  env.set_lesson(lesson);
  env.set_stats_snapshot(frozen_stats);

  EpisodeRecord rec;
  VecX obs = env.reset();
  auto trace = [&](double reward_energy) {
    rec.t.push_back(env.crane().time);
    rec.tip.push_back(env.tip_position());
    rec.q.push_back(env.crane().q);
    rec.qdot.push_back(env.crane().qdot);
    rec.tau.push_back(env.crane().tau_applied);
    rec.energy_cum.push_back(reward_energy);
  };
  if (record_trace) trace(0.0);

  StepResult result;
  while (!env.done()) {
    VecX mean, log_std;
    double value = 0.0;
    policy_forward(params, obs, mean, log_std, value);
    Vec6 action;
    for (int i = 0; i < kNumJoints; ++i) action[i] = std::clamp(mean[i], -1.0, 1.0);
    result = env.step(action);
    obs = result.observation;
    rec.decisions += 1;
    if (record_trace) trace(result.breakdown.energy_at_grasp);
  }

  rec.cause = result.breakdown.cause;
  rec.success = rec.cause == TerminationCause::success;
  rec.energy = result.breakdown.energy_at_grasp;
  rec.cycle_time = rec.success ? env.success_time() : env.crane().time;
  if (record_trace) profile_trajectory(rec, kSimDt * kSimStepsPerDecision);
  return rec;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double idx = p * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = idx - lo;
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

EvalResult evaluate(const RunConfig& cfg, const PolicyParameters& params,
                    const RunningStats& frozen_stats, const LessonSpec& lesson,
                    const EvalOptions& options) {
  EvalResult out;
  out.records.resize(options.episodes);

  const int threads = std::max(1, std::min(options.max_threads, options.episodes));
  if (threads == 1) {
    for (int i = 0; i < options.episodes; ++i)
      out.records[i] = run_episode(cfg, params, frozen_stats, lesson, options.perturbation,
                                   options.seed, static_cast<std::uint64_t>(i), options.record_traces);
  } else {
    // Episodes are seeded independently, so any partition of the index
    // range gives identical results.
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < options.episodes; i = next.fetch_add(1))
          out.records[i] = run_episode(cfg, params, frozen_stats, lesson, options.perturbation,
                                       options.seed, static_cast<std::uint64_t>(i),
                                       options.record_traces);
      });
    }
    for (auto& th : pool) th.join();
  }

  EvalSummary& s = out.summary;
  s.episodes = options.episodes;
  std::vector<double> energies;
  double time_sum = 0.0, energy_sum = 0.0;
  int hits = 0;
  for (const auto& r : out.records) {
    if (r.success) {
      hits += 1;
      time_sum += r.cycle_time;
      energy_sum += r.energy;
      energies.push_back(r.energy);
    }
  }
  s.success_rate = options.episodes > 0 ? static_cast<double>(hits) / options.episodes : 0.0;
  s.mean_cycle_time = hits > 0 ? time_sum / hits : 0.0;
  s.mean_energy = hits > 0 ? energy_sum / hits : 0.0;
  s.energy_p10 = percentile(energies, 0.10);
  s.energy_p50 = percentile(energies, 0.50);
  s.energy_p90 = percentile(energies, 0.90);
  s.relative_energy = 1.0;
  return out;
}

void profile_trajectory(EpisodeRecord& record, double dt) {
  const std::size_t n = record.tip.size();
  record.speed.assign(n, 0.0);
  record.accel.assign(n, 0.0);
  record.jerk_rms = 0.0;
  if (n < 3) return;

  for (std::size_t i = 1; i < n; ++i)
    record.speed[i] = (record.tip[i] - record.tip[i - 1]).norm() / dt;

  std::vector<Vec3> accel_vec(n, Vec3::Zero());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    accel_vec[i] = (record.tip[i + 1] - 2.0 * record.tip[i] + record.tip[i - 1]) / (dt * dt);
    record.accel[i] = accel_vec[i].norm();
  }

  double sum_sq = 0.0;
  int count = 0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Vec3 jerk = (accel_vec[i + 1] - accel_vec[i - 1]) / (2.0 * dt);
    sum_sq += jerk.squaredNorm();
    count += 1;
  }
  record.jerk_rms = count > 0 ? std::sqrt(sum_sq / count) : 0.0;
}

std::vector<SensitivityRow> sensitivity_suite(const RunConfig& cfg, const PolicyParameters& params,
                                              const RunningStats& frozen_stats,
                                              const LessonSpec& lesson,
                                              const EvalOptions& options) {
  EvalOptions base_options = options;
  base_options.perturbation = PerturbationConfig{};
  base_options.record_traces = false;
  const double baseline =
      evaluate(cfg, params, frozen_stats, lesson, base_options).summary.success_rate;

  const double r_log = cfg.world.log.radius;
  std::vector<std::pair<std::string, PerturbationConfig>> suite;
  suite.push_back({"identity", PerturbationConfig{}});
  {
    PerturbationConfig p;
    p.position_noise_radius = r_log;
    suite.push_back({"position_noise_1r", p});
  }
  {
    PerturbationConfig p;
    p.position_noise_radius = 2.0 * r_log;
    suite.push_back({"position_noise_2r", p});
  }
  {
    PerturbationConfig p;
    p.heading_noise = 10.0 * M_PI / 180.0;
    suite.push_back({"heading_pm10deg", p});
  }
  {
    PerturbationConfig p;
    p.mass_scale = 1.05;
    suite.push_back({"mass_plus5pct", p});
  }
  {
    PerturbationConfig p;
    p.slope_grade = 0.176;
    suite.push_back({"slope_uphill_17.6pct", p});
  }
  {
    PerturbationConfig p = cfg.world.perturbation;
    p.position_noise_radius = 0.0;
    p.heading_noise = 0.0;
    p.mass_scale = 1.0;
    p.slope_grade = 0.0;
    p.base_compliance_enabled = true;
    suite.push_back({"base_compliance", p});
  }

  std::vector<SensitivityRow> rows;
  for (const auto& [name, perturbation] : suite) {
    EvalOptions opt = base_options;
    opt.perturbation = perturbation;
    const double perturbed =
        evaluate(cfg, params, frozen_stats, lesson, opt).summary.success_rate;
    SensitivityRow row;
    row.name = name;
    row.baseline = baseline;
    row.perturbed = perturbed;
    row.retention = baseline > 0.0 ? perturbed / baseline : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cranerl
