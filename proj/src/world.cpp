#include "cranerl/world.hpp"

#include <cmath>
#include <stdexcept>

namespace cranerl {

LogState sample_log(const Region& region, double plane_height, TaskMode mode,
                    const LogParams& params, Rng& rng) {
  if (!region.valid()) throw std::invalid_argument("log sampling region is empty");
  // Uniform over the sector area, hence quadratic interpolation in r.
  const double u = rng.uniform();
  const double r = std::sqrt(region.r_min * region.r_min +
                             u * (region.r_max * region.r_max - region.r_min * region.r_min));
  const double theta = rng.uniform(region.theta_min, region.theta_max);
  LogState log;
  log.radius = params.radius;
  log.mass = params.mass;
  log.length = (mode == TaskMode::training) ? params.length_training : params.length_evaluation;
  log.heading = normalize_heading(rng.uniform(0.0, M_PI));
  log.support_height = plane_height;
  log.com = Vec3(r * std::cos(theta), r * std::sin(theta), plane_height + log.radius);
  return log;
}

GraspPhase detect_grasp(const GrappleFrame& grapple, double aperture_gap, const LogState& log,
                        const CaptureSpec& spec) {
  const Vec3 normal(std::cos(grapple.yaw), std::sin(grapple.yaw), 0.0);
  const Vec3 axis(std::cos(log.heading), std::sin(log.heading), 0.0);
  const double ndotu = normal.dot(axis);
  if (std::abs(ndotu) < 1e-6) return GraspPhase::none;

  // Puncture point of the log axis through the claw sweep plane.
  const double t = normal.dot(grapple.center - log.com) / ndotu;
  if (std::abs(t) > 0.5 * log.length) return GraspPhase::none;
  const Vec3 puncture = log.com + t * axis;
  const Vec3 offset = grapple.center - puncture;
  const double above = offset.z();
  const double lateral = (offset - above * Vec3::UnitZ()).norm();
  if (lateral > spec.capture_radius || above < 0.0 || above > spec.claw_depth)
    return GraspPhase::none;
  if (aperture_gap <= 2.0 * log.radius + spec.grip_slack) return GraspPhase::attached;
  return GraspPhase::captured;
}

bool check_success(const LogState& log, const CaptureSpec& spec) {
  return log.attached && log.com.z() >= log.support_height + spec.lift_threshold;
}

std::vector<Capsule> crane_capsules(const CraneFrames& frames, const GrappleFrame& grapple,
                                    double aperture_gap, const CraneModel& model,
                                    const CaptureSpec& spec) {
  const Vec3 base(0.0, 0.0, 0.0);
  const Vec3 span(-std::sin(grapple.yaw), std::cos(grapple.yaw), 0.0);  // claw separation axis
  const Vec3 down = -Vec3::UnitZ() * spec.claw_length;
  const Vec3 claw_a = grapple.center + 0.5 * aperture_gap * span;
  const Vec3 claw_b = grapple.center - 0.5 * aperture_gap * span;

  std::vector<Capsule> caps;
  caps.push_back({base, frames.pillar_top.translation(), 0.15, "pillar"});
  caps.push_back({frames.pillar_top.translation(), frames.elbow.translation(), 0.12, "boom_inner"});
  caps.push_back({frames.elbow.translation(), frames.tip.translation(), 0.10, "boom_outer"});
  caps.push_back({frames.tip.translation(), grapple.center, 0.04, "pendulum"});
  caps.push_back({grapple.center, grapple.center - Vec3(0.0, 0.0, 0.12), 0.15, "grapple_body"});
  caps.push_back({claw_a, claw_a + down, spec.claw_radius, "claw_a"});
  caps.push_back({claw_b, claw_b + down, spec.claw_radius, "claw_b"});
  return caps;
}

CollisionReport check_collisions(const std::vector<Capsule>& capsules, const Obb& bunk,
                                 double plane_height, bool plane_collision_enabled) {
  CollisionReport report;
  for (const auto& c : capsules) {
    if (!report.bunk && capsule_hits_obb(c, bunk)) {
      report.bunk = true;
      report.bunk_part = c.name;
    }
    const bool is_claw = c.name.rfind("claw", 0) == 0 || c.name == "grapple_body";
    if (is_claw) {
      const double lowest = std::min(c.a.z(), c.b.z()) - c.radius;
      if (lowest < 0.0) report.ground = true;
      if (plane_collision_enabled && lowest < plane_height) report.artificial_plane = true;
    }
  }
  return report;
}

ObservationNoise sample_observation_noise(const PerturbationConfig& cfg, Rng& rng) {
  ObservationNoise noise;
  if (cfg.position_noise_radius > 0.0) noise.position_offset = rng.on_sphere(cfg.position_noise_radius);
  if (cfg.heading_noise > 0.0) noise.heading_offset = rng.uniform(-cfg.heading_noise, cfg.heading_noise);
  return noise;
}

Vec3 slope_gravity(double grade, double magnitude) {
  const double tilt = std::atan(grade);
  return magnitude * Vec3(-std::sin(tilt), 0.0, -std::cos(tilt));
}

CraneModel scale_link_masses(CraneModel model, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("mass scale must be positive");
  for (auto& m : model.geometry.link_mass) m *= scale;
  model.geometry.total_mass *= scale;
  return model;
}

void step_chassis(ChassisState& chassis, double pitch_moment, double roll_moment,
                  const PerturbationConfig& cfg, double dt) {
  const double pitch_acc =
      (pitch_moment - cfg.compliance_stiffness * chassis.pitch - cfg.compliance_damping * chassis.pitch_rate) /
      cfg.chassis_inertia;
  const double roll_acc =
      (roll_moment - cfg.compliance_stiffness * chassis.roll - cfg.compliance_damping * chassis.roll_rate) /
      cfg.chassis_inertia;
  chassis.pitch_rate += pitch_acc * dt;
  chassis.roll_rate += roll_acc * dt;
  chassis.pitch += chassis.pitch_rate * dt;
  chassis.roll += chassis.roll_rate * dt;
}

Vec3 chassis_gravity(const ChassisState& chassis, const Vec3& base_gravity) {
  // Positive pitch tips the frame toward +x, positive roll toward +y.
  const Eigen::Matrix3d tilt =
      (Eigen::AngleAxisd(chassis.roll, Vec3::UnitX()) * Eigen::AngleAxisd(-chassis.pitch, Vec3::UnitY()))
          .toRotationMatrix();
  return tilt * base_gravity;
}

}  // namespace cranerl
