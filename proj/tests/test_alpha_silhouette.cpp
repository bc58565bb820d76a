#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "aerovox/alpha_shape.hpp"
#include "aerovox/delaunay.hpp"
#include "aerovox/rng.hpp"

using namespace aerovox;

namespace {

using P2 = std::array<double, 2>;

bool point_in_triangle(const P2& p, const P2& a, const P2& b, const P2& c) {
  const double d1 = orient2d(a, b, p);
  const double d2 = orient2d(b, c, p);
  const double d3 = orient2d(c, a, p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

bool in_complex(const P2& p, const std::vector<P2>& pts,
                const std::vector<std::array<std::uint32_t, 3>>& tris) {
  for (const auto& t : tris)
    if (point_in_triangle(p, pts[t[0]], pts[t[1]], pts[t[2]])) return true;
  return false;
}

// Dense jittered sampling of a C-shaped region: the square [0,10]^2 minus the
// cavity [3,10]x[3,7] that opens to the right.
std::vector<P2> c_shape_points() {
  Rng rng(123);
  std::vector<P2> pts;
  for (int iy = 0; iy <= 40; ++iy) {
    for (int ix = 0; ix <= 40; ++ix) {
      const double x = ix * 0.25 + rng.uniform(-0.02, 0.02);
      const double y = iy * 0.25 + rng.uniform(-0.02, 0.02);
      if (x > 3.0 && y > 3.0 && y < 7.0) continue;  // cavity
      pts.push_back({x, y});
    }
  }
  return pts;
}

// Reference dilation: `radius` rounds of one-pass 8-neighborhood growth.
Image<std::uint8_t> dilate_naive(Image<std::uint8_t> img, int radius) {
  for (int pass = 0; pass < radius; ++pass) {
    Image<std::uint8_t> next = img;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        if (img(x, y)) continue;
        for (int dy = -1; dy <= 1 && !next(x, y); ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (img.in_bounds(nx, ny) && img(nx, ny)) {
              next(x, y) = 1;
              break;
            }
          }
      }
    img = std::move(next);
  }
  return img;
}

}  // namespace

TEST_CASE("large alpha keeps the full triangulation (convex hull limit)") {
  const std::vector<P2> square = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  const auto tris = alpha_complex(square, 100.0);
  CHECK(tris.size() == 2);

  // Scaled onto an 8x8 raster the filled square covers every pixel center.
  std::vector<P2> px(square.size());
  for (size_t i = 0; i < square.size(); ++i) px[i] = {square[i][0] * 2, square[i][1] * 2};
  Image<std::uint8_t> raster(8, 8, 0);
  rasterize_triangles(px, tris, raster);
  for (auto v : raster.data) CHECK(v == 1);
}

TEST_CASE("alpha threshold acts on circumradius in normalized coordinates") {
  // A 10x10 point square normalizes to the unit square; its two Delaunay
  // triangles have normalized circumradius sqrt(2)/2, so alpha just below
  // drops everything and alpha just above keeps both.
  const std::vector<P2> square = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  CHECK(alpha_complex(square, 0.70).empty());
  CHECK(alpha_complex(square, 0.71).size() == 2);
}

TEST_CASE("the filled alpha complex of a C shape excludes the cavity") {
  const auto pts = c_shape_points();

  const auto concave = alpha_complex(pts, 0.05);
  REQUIRE(!concave.empty());
  // Kept triangles all satisfy the circumradius bound by definition; check
  // against an independent recomputation on normalized coordinates.
  double min_x = pts[0][0], max_x = min_x, min_y = pts[0][1], max_y = min_y;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p[0]);
    max_x = std::max(max_x, p[0]);
    min_y = std::min(min_y, p[1]);
    max_y = std::max(max_y, p[1]);
  }
  std::vector<P2> norm(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    norm[i] = {(pts[i][0] - min_x) / (max_x - min_x), (pts[i][1] - min_y) / (max_y - min_y)};
  for (const auto& t : concave)
    CHECK(circumradius(norm[t[0]], norm[t[1]], norm[t[2]]) <= 0.05);

  // Interior of the left bar is filled; the cavity is not.
  CHECK(in_complex({1.5, 5.0}, pts, concave));
  CHECK(in_complex({1.5, 1.5}, pts, concave));
  CHECK(in_complex({8.0, 1.5}, pts, concave));
  CHECK(!in_complex({6.5, 5.0}, pts, concave));
  CHECK(!in_complex({9.0, 5.0}, pts, concave));

  // The convex-hull limit swallows the cavity.
  const auto convex = alpha_complex(pts, 100.0);
  CHECK(in_complex({6.5, 5.0}, pts, convex));
}

TEST_CASE("rasterization sets exactly the pixels whose centers lie in a triangle") {
  const auto pts = c_shape_points();
  const auto tris = alpha_complex(pts, 0.05);

  // Map the shape into a 64x64 raster: x_px = x * 6 + 1.
  std::vector<P2> px(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) px[i] = {pts[i][0] * 6 + 1, pts[i][1] * 6 + 1};
  Image<std::uint8_t> raster(64, 64, 0);
  rasterize_triangles(px, tris, raster);

  for (int y = 0; y < raster.height; ++y)
    for (int x = 0; x < raster.width; ++x) {
      const bool expect = in_complex({x + 0.5, y + 0.5}, px, tris);
      CHECK(raster(x, y) == (expect ? 1 : 0));
    }
}

TEST_CASE("rasterization clips triangles that extend beyond the image") {
  const std::vector<P2> verts = {{-10, -10}, {20, -10}, {4, 20}};
  Image<std::uint8_t> raster(8, 8, 0);
  rasterize_triangles(verts, {{0, 1, 2}}, raster);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      CHECK(raster(x, y) == (point_in_triangle({x + 0.5, y + 0.5}, verts[0], verts[1],
                                               verts[2])
                                 ? 1
                                 : 0));
}

TEST_CASE("dilate grows a point into a Chebyshev ball") {
  Image<std::uint8_t> img(9, 9, 0);
  img(4, 4) = 1;
  dilate(img, 2);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) {
      const bool expect = std::abs(x - 4) <= 2 && std::abs(y - 4) <= 2;
      CHECK(img(x, y) == (expect ? 1 : 0));
    }
}

TEST_CASE("dilate equals repeated 8-neighborhood growth on random images") {
  Rng rng(31);
  for (int radius : {0, 1, 2, 5}) {
    Image<std::uint8_t> img(32, 24, 0);
    for (auto& v : img.data) v = rng.next_double() < 0.05 ? 1 : 0;
    Image<std::uint8_t> fast = img;
    dilate(fast, radius);
    const auto slow = dilate_naive(img, radius);
    CHECK(fast.data == slow.data);
  }
}

TEST_CASE("dilate of an empty image stays empty") {
  Image<std::uint8_t> img(16, 16, 0);
  dilate(img, 3);
  for (auto v : img.data) CHECK(v == 0);
}
