#pragma once

#include <string>
#include <vector>

#include "cranerl/types.hpp"

namespace cranerl {

// Box oriented by a yaw about the world z axis.
struct Obb {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  double yaw = 0.0;
};

struct Capsule {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.1;
  std::string name;
};

double point_obb_distance(const Vec3& p, const Obb& box);

// Distance from a segment to the box. The point-to-box distance is
// convex along the segment, so a ternary search over the parameter
// converges to the minimum.
double segment_obb_distance(const Vec3& a, const Vec3& b, const Obb& box);

inline bool capsule_hits_obb(const Capsule& c, const Obb& box) {
  return segment_obb_distance(c.a, c.b, box) <= c.radius;
}

}  // namespace cranerl
