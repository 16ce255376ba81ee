#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cranerl/config.hpp"
#include "cranerl/curriculum.hpp"
#include "cranerl/env.hpp"
#include "cranerl/policy.hpp"

namespace cranerl {

// Per-episode evaluation trace sampled at the decision rate.
struct EpisodeRecord {
  bool success = false;
  double cycle_time = 0.0;  // reset to grasp success, seconds
  double energy = 0.0;      // J, frozen at grasp initiation
  TerminationCause cause = TerminationCause::running;
  int decisions = 0;

  std::vector<double> t;
  std::vector<Vec3> tip;
  std::vector<Vec6> q;
  std::vector<Vec6> qdot;
  std::vector<Vec6> tau;
  std::vector<double> energy_cum;

  // Filled by profile_trajectory.
  std::vector<double> speed;
  std::vector<double> accel;
  double jerk_rms = 0.0;
};

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_cycle_time = 0.0;  // successful episodes only
  double mean_energy = 0.0;      // successful episodes only
  double relative_energy = 1.0;
  double energy_p10 = 0.0;
  double energy_p50 = 0.0;
  double energy_p90 = 0.0;
};

struct EvalOptions {
  int episodes = 1000;
  std::uint64_t seed = 1;
  PerturbationConfig perturbation;
  bool record_traces = false;
  int max_threads = 1;
};

struct EvalResult {
  EvalSummary summary;
  std::vector<EpisodeRecord> records;
};

// Deterministic evaluation on the target task: one generator stream
// per episode index, frozen normalization statistics, actions taken
// at the policy mean.
EvalResult evaluate(const RunConfig& cfg, const PolicyParameters& params,
                    const RunningStats& frozen_stats, const LessonSpec& lesson,
                    const EvalOptions& options);

// Boom-tip speed from step differences, acceleration and jerk from
// central differences; fills the derived fields of the record.
void profile_trajectory(EpisodeRecord& record, double dt);

struct SensitivityRow {
  std::string name;
  double baseline = 0.0;
  double perturbed = 0.0;
  double retention = 0.0;
};

// Identity row plus the six disturbance protocols, each evaluated
// with the same per-episode seeds as the baseline.
std::vector<SensitivityRow> sensitivity_suite(const RunConfig& cfg, const PolicyParameters& params,
                                              const RunningStats& frozen_stats,
                                              const LessonSpec& lesson, const EvalOptions& options);

}  // namespace cranerl
