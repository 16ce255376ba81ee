#include "cranerl/config.hpp"

#include <fstream>
#include <stdexcept>

namespace cranerl {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec6_to_json(const Vec6& v) {
  json a = json::array();
  for (int i = 0; i < 6; ++i) a.push_back(v[i]);
  return a;
}

Vec6 vec6_from_json(const json& j) {
  if (!j.is_array() || j.size() != 6) throw std::invalid_argument("expected a 6-element array");
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = j[i].get<double>();
  return v;
}

json region_to_json(const Region& r) {
  return {{"r_min", r.r_min}, {"r_max", r.r_max}, {"theta_min", r.theta_min}, {"theta_max", r.theta_max}};
}

Region region_from_json(const json& j) {
  Region r;
  r.r_min = j.at("r_min").get<double>();
  r.r_max = j.at("r_max").get<double>();
  r.theta_min = j.at("theta_min").get<double>();
  r.theta_max = j.at("theta_max").get<double>();
  return r;
}

void reject_unknown_keys(const json& doc, const json& reference, const std::string& path) {
  if (!doc.is_object()) return;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string here = path.empty() ? it.key() : path + "." + it.key();
    if (!reference.contains(it.key()))
      throw std::invalid_argument("unknown configuration key: " + here);
    if (it.value().is_object()) reject_unknown_keys(it.value(), reference.at(it.key()), here);
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  const auto& g = cfg.model.geometry;
  json geometry = {
      {"pillar_height", g.pillar_height},
      {"boom_inner_length", g.boom_inner_length},
      {"boom_outer_length", g.boom_outer_length},
      {"telescope_max", g.telescope_max},
      {"pendulum_length", g.pendulum_length},
      {"pendulum_damping", g.pendulum_damping},
      {"reach", g.reach},
      {"total_mass", g.total_mass},
      {"link_masses", json::array({g.link_mass[0], g.link_mass[1], g.link_mass[2], g.link_mass[3],
                                   g.link_mass[4], g.link_mass[5]})},
      {"com_pillar", g.com_pillar},
      {"com_inner", g.com_inner},
      {"com_outer", g.com_outer},
      {"com_telescope", g.com_telescope},
  };

  json actuators = json::array();
  for (const auto& a : cfg.model.joints) {
    actuators.push_back({{"joint_id", a.joint_id},
                         {"kind", a.kind == JointKind::revolute ? "revolute" : "prismatic"},
                         {"range_min", a.range_min},
                         {"range_max", a.range_max},
                         {"v_max", a.v_max},
                         {"effort_max", a.effort_max},
                         {"inertia_eff", a.inertia_eff},
                         {"rate_fraction", a.rate_fraction}});
  }

  const auto& w = cfg.world;
  json world = {
      {"log",
       {{"radius", w.log.radius},
        {"mass", w.log.mass},
        {"length_training", w.log.length_training},
        {"length_evaluation", w.log.length_evaluation}}},
      {"bunk",
       {{"center", vec3_to_json(w.bunk.center)},
        {"half_extents", vec3_to_json(w.bunk.half_extents)},
        {"yaw", w.bunk.yaw}}},
      {"capture",
       {{"capture_radius", w.capture.capture_radius},
        {"claw_depth", w.capture.claw_depth},
        {"grip_slack", w.capture.grip_slack},
        {"reopen_slack", w.capture.reopen_slack},
        {"lift_threshold", w.capture.lift_threshold},
        {"claw_length", w.capture.claw_length},
        {"claw_radius", w.capture.claw_radius}}},
  };

  const auto& p = w.perturbation;
  json perturbation = {
      {"position_noise_radius", p.position_noise_radius},
      {"heading_noise", p.heading_noise},
      {"mass_scale", p.mass_scale},
      {"slope_grade", p.slope_grade},
      {"base_compliance_enabled", p.base_compliance_enabled},
      {"compliance_stiffness", p.compliance_stiffness},
      {"compliance_damping", p.compliance_damping},
      {"chassis_inertia", p.chassis_inertia},
  };

  const auto& r = cfg.reward;
  json reward = {
      {"r_base", r.r_base},
      {"e_ref", r.e_ref},
      {"guidance_coef", r.guidance_coef},
      {"guidance_distance_scale", r.guidance_distance_scale},
      {"near_distance", r.near_distance},
      {"slow_bonus", r.slow_bonus},
      {"max_orientation_dev_deg", r.max_orientation_dev * 180.0 / M_PI},
      {"eps_std", r.eps_std},
      {"obs_clip", r.obs_clip},
  };

  json env = {
      {"nominal_q", vec6_to_json(cfg.env.nominal_q)},
      {"reset_perturbation", cfg.env.reset_perturbation},
      {"max_episode_sim_steps", cfg.env.max_episode_sim_steps},
  };

  const auto& c = cfg.curriculum;
  json curriculum = {
      {"initial_height", c.initial_height},
      {"initial_lessons", c.initial_lessons},
      {"descend_interval", c.descend_interval},
      {"advancement_threshold", c.advancement_threshold},
      {"window", c.window},
      {"seed_r", c.seed_r},
      {"seed_theta", c.seed_theta},
      {"seed_halfwidth_r", c.seed_halfwidth_r},
      {"seed_halfwidth_theta", c.seed_halfwidth_theta},
      {"target_region", region_to_json(c.target_region)},
      {"reach_margin", c.reach_margin},
  };

  const auto& o = cfg.ppo;
  json ppo = {
      {"clip_epsilon", o.clip_epsilon},
      {"entropy_coef", o.entropy_coef},
      {"gae_lambda", o.gae_lambda},
      {"discount", o.discount},
      {"learning_rate", o.learning_rate},
      {"num_envs", o.num_envs},
      {"horizon", o.horizon},
      {"minibatch", o.minibatch},
      {"epochs", o.epochs},
      {"value_coef", o.value_coef},
      {"max_grad_norm", o.max_grad_norm},
      {"init_log_std", o.init_log_std},
      {"normalize_advantages", o.normalize_advantages},
      {"adam_beta1", o.adam_beta1},
      {"adam_beta2", o.adam_beta2},
      {"adam_eps", o.adam_eps},
  };

  return json{{"mode", cfg.mode},
              {"seed", cfg.seed},
              {"training_budget_sim_steps", cfg.training_budget_sim_steps},
              {"output_dir", cfg.output_dir},
              {"geometry", geometry},
              {"actuators", actuators},
              {"world", world},
              {"perturbation", perturbation},
              {"reward", reward},
              {"env", env},
              {"curriculum", curriculum},
              {"ppo", ppo}};
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object() && !doc.is_null())
    throw std::invalid_argument("configuration root must be an object");
  RunConfig cfg;
  if (doc.is_null()) return cfg;
  reject_unknown_keys(doc, config_to_json(cfg), "");

  maybe(doc, "mode", cfg.mode);
  if (cfg.mode != "plain" && cfg.mode != "energy_optimized")
    throw std::invalid_argument("mode must be 'plain' or 'energy_optimized'");
  maybe(doc, "seed", cfg.seed);
  maybe(doc, "training_budget_sim_steps", cfg.training_budget_sim_steps);
  maybe(doc, "output_dir", cfg.output_dir);

  if (doc.contains("geometry")) {
    const json& j = doc.at("geometry");
    auto& g = cfg.model.geometry;
    maybe(j, "pillar_height", g.pillar_height);
    maybe(j, "boom_inner_length", g.boom_inner_length);
    maybe(j, "boom_outer_length", g.boom_outer_length);
    maybe(j, "telescope_max", g.telescope_max);
    maybe(j, "pendulum_length", g.pendulum_length);
    maybe(j, "pendulum_damping", g.pendulum_damping);
    maybe(j, "reach", g.reach);
    maybe(j, "total_mass", g.total_mass);
    if (j.contains("link_masses")) {
      const json& m = j.at("link_masses");
      if (!m.is_array() || m.size() != kNumJoints)
        throw std::invalid_argument("link_masses must have six entries");
      for (int i = 0; i < kNumJoints; ++i) g.link_mass[i] = m[i].get<double>();
    }
    maybe(j, "com_pillar", g.com_pillar);
    maybe(j, "com_inner", g.com_inner);
    maybe(j, "com_outer", g.com_outer);
    maybe(j, "com_telescope", g.com_telescope);
  }

  if (doc.contains("actuators")) {
    const json& arr = doc.at("actuators");
    if (!arr.is_array() || arr.size() != kNumJoints)
      throw std::invalid_argument("actuators must be an array of six joints");
    for (int i = 0; i < kNumJoints; ++i) {
      const json& j = arr[i];
      for (auto it = j.begin(); it != j.end(); ++it) {
        static const char* allowed[] = {"joint_id", "kind",        "range_min",   "range_max",
                                        "v_max",    "effort_max",  "inertia_eff", "rate_fraction"};
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("unknown actuator key: " + it.key());
      }
      auto& a = cfg.model.joints[i];
      maybe(j, "joint_id", a.joint_id);
      if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "revolute")
          a.kind = JointKind::revolute;
        else if (kind == "prismatic")
          a.kind = JointKind::prismatic;
        else
          throw std::invalid_argument("actuator kind must be revolute or prismatic");
      }
      maybe(j, "range_min", a.range_min);
      maybe(j, "range_max", a.range_max);
      maybe(j, "v_max", a.v_max);
      maybe(j, "effort_max", a.effort_max);
      maybe(j, "inertia_eff", a.inertia_eff);
      maybe(j, "rate_fraction", a.rate_fraction);
    }
  }

  if (doc.contains("world")) {
    const json& w = doc.at("world");
    if (w.contains("log")) {
      const json& j = w.at("log");
      maybe(j, "radius", cfg.world.log.radius);
      maybe(j, "mass", cfg.world.log.mass);
      maybe(j, "length_training", cfg.world.log.length_training);
      maybe(j, "length_evaluation", cfg.world.log.length_evaluation);
    }
    if (w.contains("bunk")) {
      const json& j = w.at("bunk");
      if (j.contains("center")) cfg.world.bunk.center = vec3_from_json(j.at("center"));
      if (j.contains("half_extents")) cfg.world.bunk.half_extents = vec3_from_json(j.at("half_extents"));
      maybe(j, "yaw", cfg.world.bunk.yaw);
    }
    if (w.contains("capture")) {
      const json& j = w.at("capture");
      maybe(j, "capture_radius", cfg.world.capture.capture_radius);
      maybe(j, "claw_depth", cfg.world.capture.claw_depth);
      maybe(j, "grip_slack", cfg.world.capture.grip_slack);
      maybe(j, "reopen_slack", cfg.world.capture.reopen_slack);
      maybe(j, "lift_threshold", cfg.world.capture.lift_threshold);
      maybe(j, "claw_length", cfg.world.capture.claw_length);
      maybe(j, "claw_radius", cfg.world.capture.claw_radius);
    }
  }

  if (doc.contains("perturbation")) {
    const json& j = doc.at("perturbation");
    auto& p = cfg.world.perturbation;
    maybe(j, "position_noise_radius", p.position_noise_radius);
    maybe(j, "heading_noise", p.heading_noise);
    maybe(j, "mass_scale", p.mass_scale);
    maybe(j, "slope_grade", p.slope_grade);
    maybe(j, "base_compliance_enabled", p.base_compliance_enabled);
    maybe(j, "compliance_stiffness", p.compliance_stiffness);
    maybe(j, "compliance_damping", p.compliance_damping);
    maybe(j, "chassis_inertia", p.chassis_inertia);
  }

  if (doc.contains("reward")) {
    const json& j = doc.at("reward");
    auto& r = cfg.reward;
    maybe(j, "r_base", r.r_base);
    maybe(j, "e_ref", r.e_ref);
    maybe(j, "guidance_coef", r.guidance_coef);
    maybe(j, "guidance_distance_scale", r.guidance_distance_scale);
    maybe(j, "near_distance", r.near_distance);
    maybe(j, "slow_bonus", r.slow_bonus);
    if (j.contains("max_orientation_dev_deg"))
      r.max_orientation_dev = j.at("max_orientation_dev_deg").get<double>() * M_PI / 180.0;
    maybe(j, "eps_std", r.eps_std);
    maybe(j, "obs_clip", r.obs_clip);
  }

  if (doc.contains("env")) {
    const json& j = doc.at("env");
    if (j.contains("nominal_q")) cfg.env.nominal_q = vec6_from_json(j.at("nominal_q"));
    maybe(j, "reset_perturbation", cfg.env.reset_perturbation);
    maybe(j, "max_episode_sim_steps", cfg.env.max_episode_sim_steps);
  }

  if (doc.contains("curriculum")) {
    const json& j = doc.at("curriculum");
    auto& c = cfg.curriculum;
    maybe(j, "initial_height", c.initial_height);
    maybe(j, "initial_lessons", c.initial_lessons);
    maybe(j, "descend_interval", c.descend_interval);
    maybe(j, "advancement_threshold", c.advancement_threshold);
    maybe(j, "window", c.window);
    maybe(j, "seed_r", c.seed_r);
    maybe(j, "seed_theta", c.seed_theta);
    maybe(j, "seed_halfwidth_r", c.seed_halfwidth_r);
    maybe(j, "seed_halfwidth_theta", c.seed_halfwidth_theta);
    if (j.contains("target_region")) c.target_region = region_from_json(j.at("target_region"));
    maybe(j, "reach_margin", c.reach_margin);
  }

  if (doc.contains("ppo")) {
    const json& j = doc.at("ppo");
    auto& o = cfg.ppo;
    maybe(j, "clip_epsilon", o.clip_epsilon);
    maybe(j, "entropy_coef", o.entropy_coef);
    maybe(j, "gae_lambda", o.gae_lambda);
    maybe(j, "discount", o.discount);
    maybe(j, "learning_rate", o.learning_rate);
    maybe(j, "num_envs", o.num_envs);
    maybe(j, "horizon", o.horizon);
    maybe(j, "minibatch", o.minibatch);
    maybe(j, "epochs", o.epochs);
    maybe(j, "value_coef", o.value_coef);
    maybe(j, "max_grad_norm", o.max_grad_norm);
    maybe(j, "init_log_std", o.init_log_std);
    maybe(j, "normalize_advantages", o.normalize_advantages);
    maybe(j, "adam_beta1", o.adam_beta1);
    maybe(j, "adam_beta2", o.adam_beta2);
    maybe(j, "adam_eps", o.adam_eps);
  }

  cfg.model.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open configuration file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return RunConfig{};
  return config_from_json(json::parse(text));
}

std::string canonical_config_json(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

GraspEnv make_env(const RunConfig& cfg, TaskMode mode, std::uint64_t seed) {
  RewardConfig reward = cfg.reward;
  reward.mode = cfg.reward_mode();
  return GraspEnv(cfg.model, cfg.world, reward, cfg.env, mode, seed);
}

std::vector<LessonSpec> make_schedule(const RunConfig& cfg) {
  return build_schedule(cfg.curriculum, cfg.model);
}

}  // namespace cranerl
