#include "cranerl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cranerl {

namespace {
double lerp(double a, double b, double t) { return a + (b - a) * t; }
}  // namespace

double lesson_tip_height(double plane_height, const CraneModel& model) {
  return plane_height + model.geometry.pendulum_length + 0.28;
}

Region lesson_region(const CurriculumConfig& cfg, double progress, double plane_height,
                     const CraneModel& model) {
  const double s = std::clamp(progress, 0.0, 1.0);
  Region r;
  r.r_min = lerp(cfg.seed_r - cfg.seed_halfwidth_r, cfg.target_region.r_min, s);
  r.r_max = lerp(cfg.seed_r + cfg.seed_halfwidth_r, cfg.target_region.r_max, s);
  r.theta_min = lerp(cfg.seed_theta - cfg.seed_halfwidth_theta, cfg.target_region.theta_min, s);
  r.theta_max = lerp(cfg.seed_theta + cfg.seed_halfwidth_theta, cfg.target_region.theta_max, s);
  r.r_min = std::max(0.0, r.r_min);

  const double reach = horizontal_reach_at(lesson_tip_height(plane_height, model), model);
  r.r_max = std::min(r.r_max, reach - cfg.reach_margin);
  if (!r.valid() || r.r_max < r.r_min)
    throw std::invalid_argument("lesson region unreachable at plane height " +
                                std::to_string(plane_height));
  return r;
}

std::vector<LessonSpec> build_schedule(const CurriculumConfig& cfg, const CraneModel& model) {
  if (!(cfg.initial_height > 0.0)) throw std::invalid_argument("initial plane height must be positive");
  if (!(cfg.descend_interval > 0.0)) throw std::invalid_argument("descend interval must be positive");
  const double steps = cfg.initial_height / cfg.descend_interval;
  const int n_descend = static_cast<int>(std::lround(steps));
  if (std::abs(steps - n_descend) > 1e-9)
    throw std::invalid_argument("initial plane height must be a multiple of the descend interval");
  if (cfg.initial_lessons < 1) throw std::invalid_argument("need at least one initial lesson");
  if (!(cfg.advancement_threshold > 0.0 && cfg.advancement_threshold <= 1.0))
    throw std::invalid_argument("advancement threshold must be in (0, 1]");
  if (cfg.window < 1) throw std::invalid_argument("window must be positive");

  std::vector<LessonSpec> lessons;
  int index = 0;

  for (int k = 1; k <= cfg.initial_lessons; ++k) {
    const double grow = static_cast<double>(k) / cfg.initial_lessons;
    CurriculumConfig expanded = cfg;
    expanded.seed_halfwidth_r = cfg.seed_halfwidth_r * grow;
    expanded.seed_halfwidth_theta = cfg.seed_halfwidth_theta * grow;
    LessonSpec lesson;
    lesson.index = index++;
    lesson.plane_height = cfg.initial_height;
    lesson.region = lesson_region(expanded, 0.0, cfg.initial_height, model);
    lesson.plane_collision_enabled = false;
    lesson.advancement_threshold = cfg.advancement_threshold;
    lesson.window = cfg.window;
    lessons.push_back(lesson);
  }

  for (int j = 1; j <= n_descend; ++j) {
    const double height = (n_descend - j) * cfg.descend_interval;
    LessonSpec lesson;
    lesson.index = index++;
    lesson.plane_height = height;
    lesson.region = lesson_region(cfg, static_cast<double>(j) / n_descend, height, model);
    lesson.plane_collision_enabled = height == 0.0;
    lesson.advancement_threshold = cfg.advancement_threshold;
    lesson.window = cfg.window;
    lessons.push_back(lesson);
  }

  LessonSpec final_lesson;
  final_lesson.index = index++;
  final_lesson.plane_height = 0.0;
  final_lesson.region = lesson_region(cfg, 1.0, 0.0, model);
  final_lesson.plane_collision_enabled = true;
  final_lesson.advancement_threshold = cfg.advancement_threshold;
  final_lesson.window = cfg.window;
  final_lesson.is_final = true;
  lessons.push_back(final_lesson);
  return lessons;
}

bool ProgressTracker::record(bool success, double threshold) {
  outcomes_.push_back(success ? 1 : 0);
  if (static_cast<int>(outcomes_.size()) > window_) outcomes_.erase(outcomes_.begin());
  if (static_cast<int>(outcomes_.size()) < window_) return false;
  if (lesson_ >= lesson_count_ - 1) return false;
  int successes = 0;
  for (uint8_t o : outcomes_) successes += o;
  if (static_cast<double>(successes) / window_ >= threshold) {
    ++lesson_;
    outcomes_.clear();
    return true;
  }
  return false;
}

double ProgressTracker::window_rate() const {
  if (outcomes_.empty()) return 0.0;
  int successes = 0;
  for (uint8_t o : outcomes_) successes += o;
  return static_cast<double>(successes) / static_cast<double>(outcomes_.size());
}

}  // namespace cranerl
