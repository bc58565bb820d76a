#include "doctest.h"

#include <array>
#include <cmath>

#include "aerovox/camera.hpp"
#include "aerovox/grid.hpp"
#include "aerovox/rng.hpp"
#include "aerovox/tri_box.hpp"

using namespace aerovox;

namespace {

CameraFrame vga_frame() {
  CameraFrame f;
  f.id = 0;
  f.intrinsics = {500.0, 500.0, 320.0, 240.0, 640, 480};
  return f;
}

// A deterministic non-axis-aligned rotation built from orthonormalized axes.
Mat3 tilted_rotation() {
  Vec3 a = Vec3(1.0, 0.2, -0.3).normalized();
  Vec3 b = Vec3(0.1, 1.0, 0.25);
  b = (b - b.dot(a) * a).normalized();
  const Vec3 c = a.cross(b);
  Mat3 r;
  r.row(0) = a.transpose();
  r.row(1) = b.transpose();
  r.row(2) = c.transpose();
  return r;
}

}  // namespace

TEST_CASE("project maps the principal ray to the principal point") {
  const CameraFrame f = vga_frame();
  const auto pr = project(Vec3(0, 0, 1), f);
  CHECK(pr.u == doctest::Approx(320.0).epsilon(1e-12));
  CHECK(pr.v == doctest::Approx(240.0).epsilon(1e-12));
  CHECK(pr.depth == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project reports negative depth for points behind the camera") {
  const CameraFrame f = vga_frame();
  const auto pr = project(Vec3(0, 0, -1), f);
  CHECK(pr.depth == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("back_project inverts project over random poses and points") {
  CameraFrame f = vga_frame();
  f.pose.rotation = tilted_rotation();
  f.pose.translation = Vec3(3.0, -2.0, 10.0);
  f.pose.validate();

  Rng rng(42);
  int tested = 0;
  for (int n = 0; n < 1000; ++n) {
    const Vec3 p(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto pr = project(p, f);
    if (pr.depth <= 0.0) continue;
    const Vec3 q = back_project(pr.u, pr.v, pr.depth, f);
    CHECK((q - p).norm() < 1e-9);
    ++tested;
  }
  CHECK(tested > 100);  // the pose actually sees a good share of the samples
}

TEST_CASE("back_project at the principal point walks down the optical axis") {
  const CameraFrame f = vga_frame();
  const Vec3 p = back_project(320.0, 240.0, 1.0, f);
  CHECK((p - Vec3(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("back_project of a corner pixel follows the inverse-intrinsics ray") {
  const CameraFrame f = vga_frame();
  const double d = 7.0;
  const Vec3 p = back_project(0.0, 0.0, d, f);
  // Direction through pixel (0,0) is K^-1 (0,0,1)^T = (-cx/fx, -cy/fy, 1).
  const Vec3 expect = d * Vec3(-320.0 / 500.0, -240.0 / 500.0, 1.0);
  CHECK((p - expect).norm() < 1e-12);
}

TEST_CASE("back_project rejects non-positive depth") {
  const CameraFrame f = vga_frame();
  CHECK_THROWS_AS(back_project(320.0, 240.0, 0.0, f), std::invalid_argument);
  CHECK_THROWS_AS(back_project(320.0, 240.0, -1.0, f), std::invalid_argument);
}

TEST_CASE("pose composed with its inverse is the identity") {
  Pose p;
  p.rotation = tilted_rotation();
  p.translation = Vec3(1.5, -0.5, 2.25);
  const Pose inv = p.inverse();

  const Mat3 r = p.rotation * inv.rotation;
  CHECK((r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);

  Rng rng(7);
  for (int n = 0; n < 100; ++n) {
    const Vec3 x(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
    CHECK((inv.apply(p.apply(x)) - x).norm() < 1e-9);
  }
}

TEST_CASE("voxel_index bins points into half-open cells") {
  GridSpec g;
  g.dims = Vec3i(192, 128, 128);
  g.r = 0.5;
  g.origin = Vec3::Zero();

  SUBCASE("interior point") {
    const auto v = voxel_index(Vec3(0.25, 0.25, 0.25), g);
    REQUIRE(v.has_value());
    CHECK(*v == VoxelIndex{0, 0, 0});
  }
  SUBCASE("point exactly on a cell boundary belongs to the upper cell") {
    const auto v = voxel_index(Vec3(0.5, 0.25, 0.25), g);
    REQUIRE(v.has_value());
    CHECK(*v == VoxelIndex{1, 0, 0});
  }
  SUBCASE("point at the global max extent is outside") {
    CHECK(!voxel_index(Vec3(96.0, 0.25, 0.25), g).has_value());
  }
  SUBCASE("point below the origin is outside") {
    CHECK(!voxel_index(Vec3(-0.001, 0.25, 0.25), g).has_value());
  }
}

TEST_CASE("voxel_center matches the binning convention") {
  GridSpec g;
  g.dims = Vec3i(192, 128, 128);
  g.r = 0.5;
  g.origin = Vec3::Zero();

  CHECK((voxel_center({0, 0, 0}, g) - Vec3(0.25, 0.25, 0.25)).norm() < 1e-15);
  CHECK((voxel_center({191, 127, 127}, g) - Vec3(95.75, 63.75, 63.75)).norm() < 1e-12);
  CHECK_THROWS_AS(voxel_center({192, 0, 0}, g), std::out_of_range);
}

TEST_CASE("voxel_index of voxel_center is the identity, exhaustively") {
  GridSpec g;
  g.dims = Vec3i(8, 8, 8);
  g.r = 0.5;
  g.origin = Vec3(-1.0, 2.0, 0.25);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const auto v = voxel_index(voxel_center({i, j, k}, g), g);
        REQUIRE(v.has_value());
        CHECK(*v == VoxelIndex{i, j, k});
      }
}

TEST_CASE("linear_index orders k fastest and i slowest") {
  const Vec3i dims(4, 3, 5);
  CHECK(linear_index(dims, 0, 0, 0) == 0);
  CHECK(linear_index(dims, 0, 0, 1) == 1);
  CHECK(linear_index(dims, 0, 1, 0) == 5);
  CHECK(linear_index(dims, 1, 0, 0) == 15);
  CHECK(linear_index(dims, 3, 2, 4) == 4 * 3 * 5 - 1);
}

TEST_CASE("BitVolume packs bits most-significant first") {
  BitVolume bits(Vec3i(2, 2, 2));
  bits.set(0, 0, 0, true);
  CHECK(bits.bytes.size() == 1);
  CHECK(bits.bytes[0] == 0x80);

  bits.set(1, 1, 1, true);  // linear index 7 -> least significant bit
  CHECK(bits.bytes[0] == 0x81);
  CHECK(bits.count() == 2);

  bits.set(0, 0, 0, false);
  CHECK(bits.bytes[0] == 0x01);
  CHECK(bits.get(1, 1, 1));
  CHECK(!bits.get(0, 0, 0));
}

TEST_CASE("in_frustum applies half-open pixel bounds and depth clipping") {
  const CameraFrame f = vga_frame();
  const double d_min = 0.5, d_max = 10.0;

  CHECK(in_frustum(Vec3(0, 0, 1), f, d_min, d_max));
  CHECK(!in_frustum(Vec3(0, 0, 0.4), f, d_min, d_max));
  CHECK(!in_frustum(Vec3(0, 0, 10.5), f, d_min, d_max));
  CHECK(!in_frustum(Vec3(0, 0, -1), f, d_min, d_max));
  // u = 640 exactly (half-open: outside). x = (640-320)/500 * z.
  CHECK(!in_frustum(Vec3(0.64, 0, 1), f, d_min, d_max));
  // One pixel inside.
  CHECK(in_frustum(Vec3((639.5 - 320.0) / 500.0, 0, 1), f, d_min, d_max));
}

TEST_CASE("tri_box_overlap handles containment, separation, and touching") {
  const Vec3 center(0, 0, 0), half(0.5, 0.5, 0.5);

  SUBCASE("triangle inside the box") {
    CHECK(tri_box_overlap({Vec3(-0.2, -0.2, 0), Vec3(0.2, -0.2, 0), Vec3(0, 0.2, 0.1)},
                          center, half));
  }
  SUBCASE("triangle far away") {
    CHECK(!tri_box_overlap({Vec3(2, 2, 2), Vec3(3, 2, 2), Vec3(2, 3, 2)}, center, half));
  }
  SUBCASE("large triangle slicing through the box") {
    CHECK(tri_box_overlap({Vec3(-5, -5, 0.1), Vec3(5, -5, 0.1), Vec3(0, 8, 0.1)},
                          center, half));
  }
  SUBCASE("triangle touching a face counts as overlap") {
    CHECK(tri_box_overlap({Vec3(0.5, -1, -1), Vec3(0.5, 1, -1), Vec3(0.5, 0, 1)},
                          center, half));
  }
  SUBCASE("triangle just beyond a face does not overlap") {
    CHECK(!tri_box_overlap({Vec3(0.5001, -1, -1), Vec3(0.5001, 1, -1), Vec3(0.5001, 0, 1)},
                           center, half));
  }
  SUBCASE("plane of the triangle separates it from the box") {
    // Triangle plane z = 0.6 misses the box even though xy projections overlap.
    CHECK(!tri_box_overlap({Vec3(-1, -1, 0.6), Vec3(1, -1, 0.6), Vec3(0, 1, 0.6)},
                           center, half));
  }
  SUBCASE("degenerate zero-area triangle acts as a segment") {
    CHECK(tri_box_overlap({Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 0)}, center, half));
    CHECK(!tri_box_overlap({Vec3(2, 0, 0), Vec3(3, 0, 0), Vec3(2.5, 0, 0)}, center, half));
  }
  SUBCASE("edge-cross axis separation") {
    // Triangle hugging a box corner diagonally but not reaching it.
    CHECK(!tri_box_overlap({Vec3(1.2, 0, 0), Vec3(0, 1.2, 0), Vec3(1.2, 1.2, 1)},
                           center, half));
  }
}

TEST_CASE("tri_box_overlap agrees with point containment on random sliver triangles") {
  // Any triangle with a vertex inside the box must overlap it.
  Rng rng(99);
  const Vec3 center(0, 0, 0), half(1, 1, 1);
  for (int n = 0; n < 500; ++n) {
    const Vec3 inside(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec3 b = inside + Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    const Vec3 c = inside + Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK(tri_box_overlap({inside, b, c}, center, half));
  }
}
