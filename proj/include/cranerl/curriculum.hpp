#pragma once

#include <vector>

#include "cranerl/kinematics.hpp"
#include "cranerl/world.hpp"

namespace cranerl {

struct LessonSpec {
  int index = 0;
  double plane_height = 0.0;
  Region region;
  bool plane_collision_enabled = true;
  double advancement_threshold = 0.30;
  int window = 20;
  bool is_final = false;
};

struct CurriculumConfig {
  double initial_height = 2.5;   // must be a multiple of descend_interval
  int initial_lessons = 4;       // expanding-region lessons at the initial height
  double descend_interval = 0.1;
  double advancement_threshold = 0.30;
  int window = 20;
  // Sector centre of the first lesson (typically the grapple's ground
  // projection) and the half-widths it expands to while the plane is
  // still at the initial height.
  double seed_r = 2.5;
  double seed_theta = M_PI;
  double seed_halfwidth_r = 0.2;
  double seed_halfwidth_theta = 0.4;
  Region target_region{3.0, 6.0, -0.8, 0.8};
  double reach_margin = 0.3;
};

// Tip height that places the grapple in grasping position over a log
// resting on a plane at the given height.
double lesson_tip_height(double plane_height, const CraneModel& model);

// Sampling region at a given curriculum progress in [0, 1]: the seed
// sector at full width morphs into the target sector, clamped to the
// reach attainable at the lesson's plane height.
Region lesson_region(const CurriculumConfig& cfg, double progress, double plane_height,
                     const CraneModel& model);

// The schedule starts with `initial_lessons` expanding sectors at the
// initial height, descends one interval per lesson down to the ground,
// and ends with an open-ended lesson on the true ground plane. Claw
// collisions with the artificial plane are enabled only at height 0.
std::vector<LessonSpec> build_schedule(const CurriculumConfig& cfg, const CraneModel& model);

// Success-rate window deciding advancement to the next lesson.
class ProgressTracker {
 public:
  ProgressTracker(int window, int lesson_count)
      : window_(window), lesson_count_(lesson_count) {}

  // Returns true when the outcome completed a full window at or above
  // the threshold and the tracker moved to the next lesson.
  bool record(bool success, double threshold);

  int lesson_index() const { return lesson_; }
  void set_lesson_index(int lesson) { lesson_ = lesson; }
  int recorded() const { return static_cast<int>(outcomes_.size()); }
  double window_rate() const;
  bool window_full() const { return static_cast<int>(outcomes_.size()) == window_; }

  const std::vector<uint8_t>& outcomes() const { return outcomes_; }
  void restore(int lesson, const std::vector<uint8_t>& outcomes) {
    lesson_ = lesson;
    outcomes_ = outcomes;
  }

 private:
  int window_;
  int lesson_count_;
  int lesson_ = 0;
  std::vector<uint8_t> outcomes_;
};

}  // namespace cranerl
