#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace aerovox {

// Delaunay triangulation of a 2D point set. Triangle vertices index the
// input array and wind counter-clockwise. Exact duplicate points are merged
// onto their first occurrence, so some input indices may be absent.
struct Triangulation {
  std::vector<std::array<double, 2>> points;          // the input, unmodified
  std::vector<std::array<std::uint32_t, 3>> triangles;
};

// Bowyer-Watson with Morton-ordered insertion and walking point location.
// Throws std::invalid_argument when fewer than 3 distinct points remain or
// all points are collinear.
Triangulation delaunay_triangulate(const std::vector<std::array<double, 2>>& points);

double circumradius(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c);

// > 0: c left of a->b, < 0: right, 0: collinear.
inline double orient2d(const std::array<double, 2>& a, const std::array<double, 2>& b,
                       const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace aerovox
