#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cranerl/checkpoint.hpp"
#include "cranerl/csv.hpp"
#include "cranerl/evalsuite.hpp"
#include "test_policies.hpp"

using namespace cranerl;
namespace fs = std::filesystem;

namespace {

const char* kCli = CRANERL_CLI_PATH;

fs::path work_dir() {
  const fs::path p = fs::temp_directory_path() / "cranerl_test_cli";
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = std::string(kCli) + " " + args;
  if (!stdout_to.empty()) cmd += " > " + stdout_to.string();
  cmd += " 2>" + (work_dir() / "stderr.txt").string();
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Checkpoint wrapping the constant close-and-rise policy on the
// trivial grasp task.
fs::path make_trivial_checkpoint() {
  const fs::path path = work_dir() / "trivial.bin";
  TrainerSnapshot snap;
  RunConfig cfg = testpolicies::trivial_grasp_config();
  snap.config_json = canonical_config_json(cfg);
  snap.params = testpolicies::constant_policy(testpolicies::close_and_rise_action());
  snap.adam_m = zeros_like(snap.params);
  snap.adam_v = zeros_like(snap.params);
  save_checkpoint(path, snap);
  return path;
}

}  // namespace

TEST_CASE("print-config emits the canonical default document") {
  const fs::path out = work_dir() / "config.json";
  REQUIRE(run_cli("print-config", out) == 0);
  CHECK(slurp(out) == canonical_config_json(RunConfig{}));
}

TEST_CASE("unknown configuration keys abort with a diagnostic") {
  const fs::path bad = work_dir() / "bad.json";
  write_file_atomic(bad, "{\"no_such_key\": 1}\n");
  CHECK(run_cli("print-config --config " + bad.string()) != 0);
  const std::string err = slurp(work_dir() / "stderr.txt");
  CHECK(err.find("no_such_key") != std::string::npos);
}

TEST_CASE("train with a zero budget writes an immediate checkpoint") {
  const fs::path out = work_dir() / "train0";
  fs::remove_all(out);
  REQUIRE(run_cli("train --steps 0 --seed 4 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "checkpoint.bin"));
  CHECK(fs::exists(out / "train_log.csv"));
  CHECK(fs::exists(out / "learning_curve.csv"));
  CHECK(fs::exists(out / "curriculum_curve.csv"));
  CHECK(fs::exists(out / "episodes.csv"));
  CHECK(fs::exists(out / "schedule.csv"));
  const TrainerSnapshot snap = load_checkpoint(out / "checkpoint.bin");
  CHECK(snap.global_sim_steps == 0);
}

TEST_CASE("eval writes a one-row summary with a perfect scripted policy") {
  const fs::path ckpt = make_trivial_checkpoint();
  const fs::path out = work_dir() / "eval";
  fs::remove_all(out);
  REQUIRE(run_cli("eval --checkpoint " + ckpt.string() + " --episodes 2 --out " + out.string()) ==
          0);
  const std::string csv = slurp(out / "summary.csv");
  CHECK(csv.find("policy,n,success_rate,mean_time_s,mean_energy_J,relative_energy") == 0);
  CHECK(csv.find("trivial,2,1,") != std::string::npos);
}

TEST_CASE("self-reference gives unit relative energy") {
  const fs::path ckpt = make_trivial_checkpoint();
  const fs::path out = work_dir() / "eval_ref";
  fs::remove_all(out);
  REQUIRE(run_cli("eval --checkpoint " + ckpt.string() + " --episodes 2 --reference " +
                  ckpt.string() + " --out " + out.string()) == 0);
  const std::string csv = slurp(out / "summary.csv");
  CHECK(csv.find(",1\n") != std::string::npos);  // relative_energy column
}

TEST_CASE("an empty sensitivity suite emits a header-only file") {
  const fs::path ckpt = make_trivial_checkpoint();
  const fs::path out = work_dir() / "sens0";
  fs::remove_all(out);
  REQUIRE(run_cli("sensitivity --checkpoint " + ckpt.string() + " --episodes 0 --out " +
                  out.string()) == 0);
  CHECK(slurp(out / "sensitivity.csv") == "perturbation,baseline,perturbed,retention\n");
}

TEST_CASE("exported trajectories match the in-memory record") {
  const fs::path ckpt = make_trivial_checkpoint();
  const fs::path out = work_dir() / "expo";
  fs::remove_all(out);
  REQUIRE(run_cli("export-trajectory --checkpoint " + ckpt.string() + " --episodes 1 --seed 9 --out " +
                  out.string()) == 0);
  const fs::path traj = out / "trajectory_0.csv";
  REQUIRE(fs::exists(traj));

  // Recompute the same episode in-process and compare field for field.
  const RunConfig cfg = testpolicies::trivial_grasp_config();
  const PolicyParameters params =
      testpolicies::constant_policy(testpolicies::close_and_rise_action());
  RunningStats stats(kObsPerFrame);
  EvalOptions options;
  options.episodes = 1;
  options.seed = 9;
  options.record_traces = true;
  const EvalResult result = evaluate(cfg, params, stats, make_schedule(cfg).back(), options);
  const EpisodeRecord& rec = result.records[0];

  std::ifstream in(traj);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "t,tip_x,tip_y,tip_z,speed,accel,q1,q2,q3,q4,q5,q6,qdot1,qdot2,qdot3,qdot4,qdot5,qdot6,"
        "tau1,tau2,tau3,tau4,tau5,tau6,energy_cum");
  size_t row = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 25);
    REQUIRE(row < rec.t.size());
    CHECK(cells[0] == rec.t[row]);
    CHECK(cells[1] == rec.tip[row].x());
    CHECK(cells[3] == rec.tip[row].z());
    CHECK(cells[4] == rec.speed[row]);
    CHECK(cells[6] == rec.q[row][0]);
    CHECK(cells[24] == rec.energy_cum[row]);
    ++row;
  }
  CHECK(row == rec.t.size());
}

TEST_CASE("missing checkpoint file exits nonzero with a message") {
  CHECK(run_cli("eval --checkpoint /nonexistent/x.bin --episodes 1") != 0);
  const std::string err = slurp(work_dir() / "stderr.txt");
  CHECK(err.find("error") != std::string::npos);
}
