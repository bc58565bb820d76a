#include "aerovox/alpha_shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aerovox {

std::vector<std::array<std::uint32_t, 3>> alpha_complex(
    const std::vector<std::array<double, 2>>& points, double alpha) {
  if (points.size() < 3) throw std::invalid_argument("alpha_complex: need >= 3 points");
  double min_x = points[0][0], max_x = min_x, min_y = points[0][1], max_y = min_y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p[0]);
    max_x = std::max(max_x, p[0]);
    min_y = std::min(min_y, p[1]);
    max_y = std::max(max_y, p[1]);
  }
  const double sx = max_x > min_x ? max_x - min_x : 1.0;
  const double sy = max_y > min_y ? max_y - min_y : 1.0;
  std::vector<std::array<double, 2>> norm(points.size());
  for (size_t i = 0; i < points.size(); ++i)
    norm[i] = {(points[i][0] - min_x) / sx, (points[i][1] - min_y) / sy};

  const Triangulation tri = delaunay_triangulate(norm);
  std::vector<std::array<std::uint32_t, 3>> kept;
  kept.reserve(tri.triangles.size());
  for (const auto& t : tri.triangles)
    if (circumradius(norm[t[0]], norm[t[1]], norm[t[2]]) <= alpha) kept.push_back(t);
  return kept;
}

void rasterize_triangles(const std::vector<std::array<double, 2>>& vertices,
                         const std::vector<std::array<std::uint32_t, 3>>& triangles,
                         Image<std::uint8_t>& target) {
  for (const auto& t : triangles) {
    const auto& a = vertices[t[0]];
    const auto& b = vertices[t[1]];
    const auto& c = vertices[t[2]];
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a[0], b[0], c[0]}))));
    const int x1 = std::min(target.width - 1,
                            static_cast<int>(std::ceil(std::max({a[0], b[0], c[0]}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a[1], b[1], c[1]}))));
    const int y1 = std::min(target.height - 1,
                            static_cast<int>(std::ceil(std::max({a[1], b[1], c[1]}))));
    const double orient = orient2d(a, b, c);
    if (orient == 0.0) continue;  // degenerate; the point stamp covers it
    const double sign = orient > 0.0 ? 1.0 : -1.0;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const std::array<double, 2> p{x + 0.5, y + 0.5};
        if (sign * orient2d(a, b, p) >= 0.0 && sign * orient2d(b, c, p) >= 0.0 &&
            sign * orient2d(c, a, p) >= 0.0)
          target(x, y) = 1;
      }
    }
  }
}

void dilate(Image<std::uint8_t>& img, int radius) {
  if (radius <= 0) return;
  // Two-pass chamfer transform: exact Chebyshev distance to the nearest set
  // pixel, then threshold. Equivalent to `radius` rounds of 8-neighborhood
  // dilation at O(W*H).
  const int inf = img.width + img.height + 2;
  Image<int> dist(img.width, img.height, inf);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img(x, y)) dist(x, y) = 0;

  const auto relax = [&](int x, int y, int nx, int ny) {
    if (dist.in_bounds(nx, ny) && dist(nx, ny) + 1 < dist(x, y))
      dist(x, y) = dist(nx, ny) + 1;
  };
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      relax(x, y, x - 1, y);
      relax(x, y, x - 1, y - 1);
      relax(x, y, x, y - 1);
      relax(x, y, x + 1, y - 1);
    }
  }
  for (int y = img.height - 1; y >= 0; --y) {
    for (int x = img.width - 1; x >= 0; --x) {
      relax(x, y, x + 1, y);
      relax(x, y, x + 1, y + 1);
      relax(x, y, x, y + 1);
      relax(x, y, x - 1, y + 1);
    }
  }
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (dist(x, y) <= radius) img(x, y) = 1;
}

}  // namespace aerovox
