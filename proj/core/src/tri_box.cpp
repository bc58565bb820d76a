#include "aerovox/tri_box.hpp"

#include <algorithm>
#include <cmath>

namespace aerovox {

namespace {

inline void min_max3(double a, double b, double c, double& lo, double& hi) {
  lo = std::min({a, b, c});
  hi = std::max({a, b, c});
}

// Projects the triangle and box onto `axis`; true when the projections are
// strictly disjoint. A zero axis projects everything to 0 and never separates.
inline bool separated_on(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                         const Vec3& half) {
  const double p0 = axis.dot(v0), p1 = axis.dot(v1), p2 = axis.dot(v2);
  double lo, hi;
  min_max3(p0, p1, p2, lo, hi);
  const double rad = half.x() * std::abs(axis.x()) + half.y() * std::abs(axis.y()) +
                     half.z() * std::abs(axis.z());
  return lo > rad || hi < -rad;
}

}  // namespace

bool tri_box_overlap(const std::array<Vec3, 3>& tri, const Vec3& box_center,
                     const Vec3& box_half) {
  const Vec3 v0 = tri[0] - box_center;
  const Vec3 v1 = tri[1] - box_center;
  const Vec3 v2 = tri[2] - box_center;

  // Box face normals (3 axes): plain AABB test of the triangle.
  double lo, hi;
  min_max3(v0.x(), v1.x(), v2.x(), lo, hi);
  if (lo > box_half.x() || hi < -box_half.x()) return false;
  min_max3(v0.y(), v1.y(), v2.y(), lo, hi);
  if (lo > box_half.y() || hi < -box_half.y()) return false;
  min_max3(v0.z(), v1.z(), v2.z(), lo, hi);
  if (lo > box_half.z() || hi < -box_half.z()) return false;

  // Triangle normal (1 axis).
  const Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
  if (separated_on(e0.cross(e1), v0, v1, v2, box_half)) return false;

  // Edge cross products (9 axes).
  const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const Vec3& e : {e0, e1, e2})
    for (const Vec3& u : axes)
      if (separated_on(u.cross(e), v0, v1, v2, box_half)) return false;

  return true;
}

}  // namespace aerovox
