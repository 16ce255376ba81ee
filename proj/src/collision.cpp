#include "cranerl/collision.hpp"

#include <algorithm>
#include <cmath>

namespace cranerl {

static Vec3 to_box_frame(const Vec3& p, const Obb& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const Vec3 d = p - box.center;
  return Vec3(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z());
}

double point_obb_distance(const Vec3& p, const Obb& box) {
  const Vec3 local = to_box_frame(p, box);
  const Vec3 excess = (local.cwiseAbs() - box.half_extents).cwiseMax(0.0);
  return excess.norm();
}

double segment_obb_distance(const Vec3& a, const Vec3& b, const Obb& box) {
  const Vec3 la = to_box_frame(a, box);
  const Vec3 lb = to_box_frame(b, box);
  auto dist_at = [&](double t) {
    const Vec3 p = la + t * (lb - la);
    const Vec3 excess = (p.cwiseAbs() - box.half_extents).cwiseMax(0.0);
    return excess.norm();
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (dist_at(m1) <= dist_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  return dist_at(0.5 * (lo + hi));
}

}  // namespace cranerl
