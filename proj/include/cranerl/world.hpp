#pragma once

#include <string>
#include <vector>

#include "cranerl/collision.hpp"
#include "cranerl/kinematics.hpp"
#include "cranerl/rng.hpp"
#include "cranerl/types.hpp"

namespace cranerl {

enum class TaskMode { training, evaluation };

struct LogParams {
  double radius = 0.08;
  double mass = 50.0;
  double length_training = 1.5;
  double length_evaluation = 3.0;
};

// A single log resting on the artificial plane (or hanging in the
// grapple once attached). The heading is the horizontal axis angle,
// kept in [0, pi) since the cylinder has no front.
struct LogState {
  Vec3 com = Vec3::Zero();
  Vec3 com_velocity = Vec3::Zero();
  double heading = 0.0;
  double length = 1.5;
  double radius = 0.08;
  double mass = 50.0;
  double support_height = 0.0;
  bool attached = false;
};

// Annular sector in crane-base polar coordinates.
struct Region {
  double r_min = 0.0;
  double r_max = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;

  bool valid() const { return r_min >= 0.0 && r_min <= r_max && theta_min <= theta_max; }
};

struct CaptureSpec {
  double capture_radius = 0.25;  // half-width of the claw sweep, in the closing plane
  double claw_depth = 0.35;      // how far above the log axis the grapple centre may sit
  double grip_slack = 0.05;      // aperture margin over the log diameter
  double reopen_slack = 0.10;    // extra gap before an attached log is released
  double lift_threshold = 0.3;
  double claw_length = 0.35;
  double claw_radius = 0.05;
};

enum class GraspPhase { none, captured, attached };

struct PerturbationConfig {
  double position_noise_radius = 0.0;  // m, observation offset on a sphere surface
  double heading_noise = 0.0;          // rad, half-range of the observed heading error
  double mass_scale = 1.0;             // multiplies every crane link mass
  double slope_grade = 0.0;            // rise/run, tilts gravity uphill
  bool base_compliance_enabled = false;
  double compliance_stiffness = 2e5;  // N*m/rad
  double compliance_damping = 1e4;    // N*m*s/rad
  double chassis_inertia = 2e4;       // kg*m^2
};

struct ObservationNoise {
  Vec3 position_offset = Vec3::Zero();
  double heading_offset = 0.0;
};

// Chassis pitch/roll spring-damper used as the dynamic-vehicle proxy.
struct ChassisState {
  double pitch = 0.0;
  double roll = 0.0;
  double pitch_rate = 0.0;
  double roll_rate = 0.0;
};

struct CollisionReport {
  bool bunk = false;
  bool artificial_plane = false;
  bool ground = false;
  std::string bunk_part;
};

LogState sample_log(const Region& region, double plane_height, TaskMode mode,
                    const LogParams& params, Rng& rng);

// Instantaneous classification of the grapple/log configuration.
// Capture tests where the log axis punctures the claw sweep plane;
// attachment additionally needs the aperture closed onto the log.
GraspPhase detect_grasp(const GrappleFrame& grapple, double aperture_gap, const LogState& log,
                        const CaptureSpec& spec);

bool check_success(const LogState& log, const CaptureSpec& spec);

std::vector<Capsule> crane_capsules(const CraneFrames& frames, const GrappleFrame& grapple,
                                    double aperture_gap, const CraneModel& model,
                                    const CaptureSpec& spec);

CollisionReport check_collisions(const std::vector<Capsule>& capsules, const Obb& bunk,
                                 double plane_height, bool plane_collision_enabled);

ObservationNoise sample_observation_noise(const PerturbationConfig& cfg, Rng& rng);

// Gravity tilted uphill by atan(grade) about the lateral axis.
Vec3 slope_gravity(double grade, double magnitude = kGravityAccel);

CraneModel scale_link_masses(CraneModel model, double scale);

void step_chassis(ChassisState& chassis, double pitch_moment, double roll_moment,
                  const PerturbationConfig& cfg, double dt);

// Gravity as seen from the tilted chassis frame.
Vec3 chassis_gravity(const ChassisState& chassis, const Vec3& base_gravity);

inline double normalize_heading(double psi) {
  double h = std::fmod(psi, M_PI);
  if (h < 0.0) h += M_PI;
  return h;
}

}  // namespace cranerl
