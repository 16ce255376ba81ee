#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cranerl/checkpoint.hpp"
#include "cranerl/config.hpp"
#include "cranerl/csv.hpp"
#include "cranerl/evalsuite.hpp"
#include "cranerl/trainer.hpp"

namespace fs = std::filesystem;
using namespace cranerl;

namespace {

int max_threads_from_env() {
  const char* raw = std::getenv("CRANE_RL_THREADS");
  if (!raw) return 1;
  const long v = std::strtol(raw, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 1;
}

void apply_perturb_flags(PerturbationConfig& p, const std::vector<std::string>& flags) {
  for (const auto& flag : flags) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--perturb expects NAME=VALUE, got '" + flag + "'");
    const std::string name = flag.substr(0, eq);
    const double value = std::stod(flag.substr(eq + 1));
    if (name == "position_noise_radius")
      p.position_noise_radius = value;
    else if (name == "heading_noise")
      p.heading_noise = value;
    else if (name == "mass_scale")
      p.mass_scale = value;
    else if (name == "slope_grade")
      p.slope_grade = value;
    else if (name == "base_compliance")
      p.base_compliance_enabled = value != 0.0;
    else
      throw CLI::ValidationError("unknown perturbation '" + name + "'");
  }
}

void write_training_outputs(const Trainer& trainer, const fs::path& out_dir) {
  CsvTable train_log({"step", "lesson", "plane_height", "mean_return", "success_rate",
                      "policy_loss", "value_loss", "entropy", "clip_fraction", "approx_kl",
                      "learning_rate", "episodes"});
  CsvTable learning_curve({"step", "mean_return", "success_rate"});
  CsvTable curriculum_curve({"step", "plane_height"});
  for (const auto& r : trainer.update_log()) {
    train_log.add_row({std::to_string(r.step), std::to_string(r.lesson),
                       format_double(r.plane_height), format_double(r.mean_return),
                       format_double(r.success_rate), format_double(r.policy_loss),
                       format_double(r.value_loss), format_double(r.entropy),
                       format_double(r.clip_fraction), format_double(r.approx_kl),
                       format_double(r.learning_rate), std::to_string(r.episodes)});
    learning_curve.add_row({std::to_string(r.step), format_double(r.mean_return),
                            format_double(r.success_rate)});
    curriculum_curve.add_row({std::to_string(r.step), format_double(r.plane_height)});
  }
  train_log.write(out_dir / "train_log.csv");
  learning_curve.write(out_dir / "learning_curve.csv");
  curriculum_curve.write(out_dir / "curriculum_curve.csv");

  CsvTable episodes({"episode", "end_step", "lesson", "success", "return", "energy_J",
                     "sim_steps", "cause"});
  for (const auto& e : trainer.episode_log())
    episodes.add_row({std::to_string(e.index), std::to_string(e.end_step),
                      std::to_string(e.lesson), std::to_string(e.success),
                      format_double(e.episode_return), format_double(e.energy),
                      std::to_string(e.sim_steps), e.cause});
  episodes.write(out_dir / "episodes.csv");

  // Schedule echo for auditing.
  CsvTable schedule({"lesson", "plane_height", "r_min", "r_max", "theta_min", "theta_max",
                     "plane_collision", "final"});
  for (const auto& l : trainer.schedule())
    schedule.add_row({std::to_string(l.index), format_double(l.plane_height),
                      format_double(l.region.r_min), format_double(l.region.r_max),
                      format_double(l.region.theta_min), format_double(l.region.theta_max),
                      l.plane_collision_enabled ? "1" : "0", l.is_final ? "1" : "0"});
  schedule.write(out_dir / "schedule.csv");
}

void write_trajectory_csv(const EpisodeRecord& rec, const fs::path& path) {
  std::vector<std::string> header{"t", "tip_x", "tip_y", "tip_z", "speed", "accel"};
  for (int i = 1; i <= 6; ++i) header.push_back("q" + std::to_string(i));
  for (int i = 1; i <= 6; ++i) header.push_back("qdot" + std::to_string(i));
  for (int i = 1; i <= 6; ++i) header.push_back("tau" + std::to_string(i));
  header.push_back("energy_cum");
  CsvTable table(header);
  for (std::size_t k = 0; k < rec.t.size(); ++k) {
    std::vector<std::string> row{format_double(rec.t[k]),       format_double(rec.tip[k].x()),
                                 format_double(rec.tip[k].y()), format_double(rec.tip[k].z()),
                                 format_double(rec.speed[k]),   format_double(rec.accel[k])};
    for (int i = 0; i < 6; ++i) row.push_back(format_double(rec.q[k][i]));
    for (int i = 0; i < 6; ++i) row.push_back(format_double(rec.qdot[k][i]));
    for (int i = 0; i < 6; ++i) row.push_back(format_double(rec.tau[k][i]));
    row.push_back(format_double(rec.energy_cum[k]));
    table.add_row(row);
  }
  table.write(path);
}

struct LoadedPolicy {
  RunConfig config;
  TrainerSnapshot snapshot;
};

LoadedPolicy load_policy(const std::string& checkpoint_path) {
  LoadedPolicy lp;
  lp.snapshot = load_checkpoint(checkpoint_path);
  lp.config = config_from_json(nlohmann::json::parse(lp.snapshot.config_json));
  return lp;
}

LessonSpec target_lesson(const RunConfig& cfg) {
  const auto schedule = make_schedule(cfg);
  return schedule.back();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware crane log-grasping: training, evaluation and analysis"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, out_dir, mode, resume_path, reference_path;
  std::uint64_t seed = 0;
  bool seed_set = false, steps_set = false;
  std::uint64_t steps = 0;
  int episodes = -1;
  std::vector<std::string> perturb_flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration file (JSON)");
    cmd->add_option("--seed", seed, "Override the run seed")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--out", out_dir, "Output directory");
  };

  CLI::App* train = app.add_subcommand("train", "Train a policy with the curriculum");
  add_common(train);
  train->add_option("--steps", steps, "Training budget in simulation steps")
      ->each([&](const std::string&) { steps_set = true; });
  train->add_option("--mode", mode, "Reward mode: plain or energy")
      ->check(CLI::IsMember({"plain", "energy", "energy_optimized"}));
  train->add_option("--resume", resume_path, "Continue from a checkpoint");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the target task");
  add_common(eval);
  eval->add_option("--checkpoint", checkpoint_path, "Checkpoint to evaluate")->required();
  eval->add_option("--episodes", episodes, "Number of evaluation episodes");
  eval->add_option("--perturb", perturb_flags, "Perturbation NAME=VALUE (repeatable)");
  eval->add_option("--reference", reference_path, "Reference checkpoint for relative energy");

  CLI::App* sens = app.add_subcommand("sensitivity", "Run the disturbance retention suite");
  add_common(sens);
  sens->add_option("--checkpoint", checkpoint_path, "Checkpoint to evaluate")->required();
  sens->add_option("--episodes", episodes, "Episodes per suite row");

  CLI::App* expo = app.add_subcommand("export-trajectory", "Record evaluation episode traces");
  add_common(expo);
  expo->add_option("--checkpoint", checkpoint_path, "Checkpoint to run")->required();
  expo->add_option("--episodes", episodes, "Number of episodes to export");
  expo->add_option("--perturb", perturb_flags, "Perturbation NAME=VALUE (repeatable)");

  CLI::App* printc = app.add_subcommand("print-config", "Print the effective configuration");
  printc->add_option("--config", config_path, "Run configuration file (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (printc->parsed()) {
      const RunConfig cfg = load_config(config_path);
      std::cout << canonical_config_json(cfg);
      return 0;
    }

    if (train->parsed()) {
      RunConfig cfg = load_config(config_path);
      if (seed_set) cfg.seed = seed;
      if (steps_set) cfg.training_budget_sim_steps = steps;
      if (!mode.empty()) cfg.mode = (mode == "plain") ? "plain" : "energy_optimized";
      if (!out_dir.empty()) cfg.output_dir = out_dir;

      std::unique_ptr<Trainer> trainer;
      if (!resume_path.empty()) {
        TrainerSnapshot snap = load_checkpoint(resume_path);
        RunConfig restored = config_from_json(nlohmann::json::parse(snap.config_json));
        if (steps_set) restored.training_budget_sim_steps = steps;
        if (!out_dir.empty()) restored.output_dir = out_dir;
        if (!config_path.empty() || seed_set || !mode.empty())
          throw std::runtime_error(
              "--resume uses the checkpoint's configuration; --config/--seed/--mode "
              "cannot be combined with it");
        cfg = restored;
        trainer = std::make_unique<Trainer>(cfg, snap);
      } else {
        trainer = std::make_unique<Trainer>(cfg);
      }

      trainer->run();

      const fs::path out(cfg.output_dir);
      fs::create_directories(out);
      save_checkpoint(out / "checkpoint.bin", trainer->snapshot());
      write_training_outputs(*trainer, out);
      std::cout << "trained " << trainer->global_sim_steps() << " sim steps, "
                << trainer->episodes() << " episodes, lesson " << trainer->lesson_index()
                << "; outputs in " << out.string() << "\n";
      return 0;
    }

    LoadedPolicy lp = load_policy(checkpoint_path);
    const fs::path out(out_dir.empty() ? lp.config.output_dir : out_dir);
    fs::create_directories(out);

    EvalOptions options;
    options.seed = seed_set ? seed : lp.config.seed;
    options.max_threads = max_threads_from_env();
    const LessonSpec lesson = target_lesson(lp.config);

    if (eval->parsed()) {
      options.episodes = episodes > 0 ? episodes : 1000;
      apply_perturb_flags(options.perturbation, perturb_flags);
      EvalResult result =
          evaluate(lp.config, lp.snapshot.params, lp.snapshot.stats, lesson, options);

      if (!reference_path.empty()) {
        LoadedPolicy ref = load_policy(reference_path);
        EvalOptions ref_options = options;
        EvalResult ref_result =
            evaluate(ref.config, ref.snapshot.params, ref.snapshot.stats,
                     target_lesson(ref.config), ref_options);
        if (ref_result.summary.mean_energy > 0.0)
          result.summary.relative_energy =
              result.summary.mean_energy / ref_result.summary.mean_energy;
      }

      CsvTable summary({"policy", "n", "success_rate", "mean_time_s", "mean_energy_J",
                        "relative_energy"});
      summary.add_row({fs::path(checkpoint_path).stem().string(),
                       std::to_string(result.summary.episodes),
                       format_double(result.summary.success_rate),
                       format_double(result.summary.mean_cycle_time),
                       format_double(result.summary.mean_energy),
                       format_double(result.summary.relative_energy)});
      summary.write(out / "summary.csv");
      std::cout << "success_rate " << result.summary.success_rate << ", mean_time_s "
                << result.summary.mean_cycle_time << ", mean_energy_J "
                << result.summary.mean_energy << "; wrote " << (out / "summary.csv").string()
                << "\n";
      return 0;
    }

    if (sens->parsed()) {
      CsvTable table({"perturbation", "baseline", "perturbed", "retention"});
      if (episodes != 0) {  // zero episodes requests an empty suite
        options.episodes = episodes > 0 ? episodes : 200;
        const auto rows =
            sensitivity_suite(lp.config, lp.snapshot.params, lp.snapshot.stats, lesson, options);
        for (const auto& r : rows)
          table.add_row({r.name, format_double(r.baseline), format_double(r.perturbed),
                         format_double(r.retention)});
      }
      table.write(out / "sensitivity.csv");
      std::cout << "wrote " << (out / "sensitivity.csv").string() << "\n";
      return 0;
    }

    if (expo->parsed()) {
      options.episodes = episodes > 0 ? episodes : 1;
      options.record_traces = true;
      apply_perturb_flags(options.perturbation, perturb_flags);
      EvalResult result =
          evaluate(lp.config, lp.snapshot.params, lp.snapshot.stats, lesson, options);
      for (int i = 0; i < options.episodes; ++i)
        write_trajectory_csv(result.records[i],
                             out / ("trajectory_" + std::to_string(i) + ".csv"));
      std::cout << "wrote " << options.episodes << " trajectory file(s) in " << out.string()
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
