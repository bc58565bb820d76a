#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "aerovox/synth.hpp"

using namespace aerovox;

namespace {

constexpr std::uint16_t kBuilding = 1;
constexpr std::uint16_t kPerson = 6;
constexpr std::uint16_t kGrass = 9;
constexpr std::uint16_t kRoad = 14;
constexpr std::uint16_t kTree = 17;

// Flat grass field with one box in the middle and a single nadir pass whose
// grid puts a camera (almost) exactly over the box.
SynthSceneSpec box_field_spec() {
  SynthSceneSpec s;
  s.seed = 21;
  s.extent_x = 60.0;
  s.extent_y = 50.0;
  s.ground = {0.0, 0.0, 0.0, 0.0, 0.0, 0, kGrass};
  s.points_per_m2 = 2.0;

  Primitive box;
  box.kind = Primitive::Kind::Box;
  box.cls = kBuilding;
  box.size = Vec3(8.0, 8.0, 6.0);
  box.center = Vec3(30.0, 25.0, 3.0);
  s.primitives.push_back(box);

  s.pattern.passes = {{40.0, -90.0}};
  s.pattern.image_width = 64;
  s.pattern.image_height = 48;
  s.pattern.focal_px = 40.0;
  return s;
}

const SynthScene& box_field() {
  static const SynthScene scene = generate_scene(box_field_spec());
  return scene;
}

const SynthScene& desk() {
  static const SynthScene scene = generate_scene(desk_scene_spec());
  return scene;
}

}  // namespace

TEST_CASE("survey grids space flight lines by the footprint overlap") {
  const SynthScene& scene = box_field();
  const SynthSceneSpec& spec = scene.spec;
  const double fw = 40.0 * spec.pattern.image_width / spec.pattern.focal_px;   // 64 m
  const double fh = 40.0 * spec.pattern.image_height / spec.pattern.focal_px;  // 48 m

  // Split the double grid by flight heading (image-down = heading for nadir).
  std::set<double> xs_along_y, ys_along_y;
  for (const CameraFrame& f : scene.frames) {
    f.pose.validate();
    const Vec3 eye = f.pose.center();
    CHECK(eye.z() == doctest::Approx(40.0));  // flat ground, fixed altitude
    CHECK((f.pose.rotation.row(2).transpose() - Vec3(0, 0, -1)).norm() < 1e-12);
    if (f.pose.rotation(1, 1) > 0.9) {  // heading +y
      xs_along_y.insert(eye.x());
      ys_along_y.insert(eye.y());
    }
  }
  REQUIRE(xs_along_y.size() >= 2);

  const std::vector<double> xs(xs_along_y.begin(), xs_along_y.end());
  const std::vector<double> ys(ys_along_y.begin(), ys_along_y.end());
  for (size_t i = 1; i < xs.size(); ++i) {
    const double overlap = (fw - (xs[i] - xs[i - 1])) / fw;
    CHECK(overlap == doctest::Approx(spec.pattern.side_overlap).epsilon(1e-9));
  }
  for (size_t i = 1; i < ys.size(); ++i) {
    const double overlap = (fh - (ys[i] - ys[i - 1])) / fh;
    CHECK(overlap == doctest::Approx(spec.pattern.forward_overlap).epsilon(1e-9));
  }
  // The grid is centered on the extent with sub-spacing margins.
  CHECK(xs.front() == doctest::Approx(spec.extent_x - xs.back()).epsilon(1e-9));
  CHECK(xs.front() >= 0.0);
  CHECK(xs.front() < 0.5 * (fw * (1.0 - spec.pattern.side_overlap)) + 1e-9);

  // Frame ids are 1..N without gaps.
  std::vector<int> ids;
  for (const CameraFrame& f : scene.frames) ids.push_back(f.id);
  std::sort(ids.begin(), ids.end());
  for (size_t i = 0; i < ids.size(); ++i) CHECK(ids[i] == static_cast<int>(i) + 1);
}

TEST_CASE("oblique passes tilt the optical axis by the requested angle") {
  SynthSceneSpec spec = box_field_spec();
  spec.primitives.clear();
  spec.pattern.passes = {{30.0, -75.0}};
  const SynthScene scene = generate_scene(spec);
  REQUIRE(!scene.frames.empty());
  for (const CameraFrame& f : scene.frames) {
    f.pose.validate();
    const double cos_from_down = f.pose.rotation.row(2).transpose().dot(Vec3(0, 0, -1));
    CHECK(cos_from_down == doctest::Approx(std::cos(15.0 * M_PI / 180.0)).epsilon(1e-12));
  }
}

TEST_CASE("rendered depth and masks agree with the analytic raycaster") {
  const SynthScene& scene = desk();
  REQUIRE(scene.depths.size() == scene.frames.size());
  REQUIRE(scene.masks.size() == scene.frames.size());

  for (size_t n = 0; n < scene.frames.size(); n += 5) {
    const CameraFrame& f = scene.frames[n];
    const Mat3 r_cw = f.pose.rotation.transpose();
    const Vec3 c = f.pose.center();
    CHECK(scene.masks[n].frame_id == f.id);
    for (int v = 0; v < f.intrinsics.height; v += 7)
      for (int u = 0; u < f.intrinsics.width; u += 7) {
        const Vec3 dir_cam((u + 0.5 - f.intrinsics.cx) / f.intrinsics.fx,
                           (v + 0.5 - f.intrinsics.cy) / f.intrinsics.fy, 1.0);
        const SynthScene::Hit hit = scene.raycast(c, r_cw * dir_cam);
        if (hit.valid) {
          CHECK(scene.depths[n](u, v) == static_cast<float>(hit.t));
          CHECK(scene.masks[n].classes(u, v) == static_cast<std::uint8_t>(hit.cls));
        } else {
          CHECK(scene.depths[n](u, v) == 0.0f);
          CHECK(scene.masks[n].classes(u, v) == 0);
        }
      }
  }
}

TEST_CASE("every sampled point lies on a surface of its own class") {
  const SynthScene& scene = desk();
  REQUIRE(scene.cloud.size() > 10000);
  size_t checked = 0;
  for (size_t i = 0; i < scene.cloud.size(); i += 13) {
    CHECK(scene.class_matches(scene.cloud.positions[i], 1e-9, scene.cloud.labels[i]));
    ++checked;
  }
  CHECK(checked > 500);
}

TEST_CASE("grounded primitives punch holes in the ground sampling") {
  const SynthScene& scene = desk();
  const auto in_rect = [](const Vec3& p, double cx, double cy, double hx, double hy) {
    return std::abs(p.x() - cx) <= hx && std::abs(p.y() - cy) <= hy;
  };
  for (size_t i = 0; i < scene.cloud.size(); ++i) {
    const std::uint16_t cls = scene.cloud.labels[i];
    if (cls != kGrass && cls != kRoad) continue;
    const Vec3& p = scene.cloud.positions[i];
    CHECK(!in_rect(p, 16.0, 16.0, 5.0, 4.0));   // building 1
    CHECK(!in_rect(p, 48.0, 30.0, 6.0, 4.5));   // building 2
    CHECK(std::hypot(p.x() - 34.0, p.y() - 30.0) > 0.25);  // person cylinder
  }
}

TEST_CASE("the analytic model resolves overlaps instance-first") {
  SynthSceneSpec spec = box_field_spec();
  Primitive tree;
  tree.kind = Primitive::Kind::Sphere;
  tree.cls = kTree;
  tree.size = Vec3(3.0, 3.0, 3.0);
  tree.center = Vec3(10.0, 10.0, 3.0);
  spec.primitives.push_back(tree);
  Primitive person;
  person.kind = Primitive::Kind::Cylinder;
  person.cls = kPerson;
  person.size = Vec3(0.3, 0.3, 2.0);
  person.center = Vec3(10.0, 10.0, 1.0);
  spec.primitives.push_back(person);
  spec.ground.road_center_x = 30.0;
  spec.ground.road_half_width = 4.0;
  spec.ground.road_cls = kRoad;
  const SynthScene scene = generate_scene(spec);

  // Inside both person (instance) and tree (others): instance wins.
  CHECK(scene.class_at(Vec3(10.0, 10.0, 1.5), 0.01) == kPerson);
  CHECK(scene.class_matches(Vec3(10.0, 10.0, 1.5), 0.01, kPerson));
  CHECK(scene.class_matches(Vec3(10.0, 10.0, 1.5), 0.01, kTree));
  // Inside the tree only.
  CHECK(scene.class_at(Vec3(10.0, 10.0, 5.0), 0.01) == kTree);
  // Plain ground, road strip, and empty space.
  CHECK(scene.class_at(Vec3(2.0, 2.0, 0.0), 0.01) == kGrass);
  CHECK(scene.class_at(Vec3(30.0, 40.0, 0.0), 0.01) == kRoad);
  CHECK(scene.class_at(Vec3(2.0, 2.0, 10.0), 0.01) == 0);
  CHECK(!scene.class_matches(Vec3(2.0, 2.0, 10.0), 0.01, kGrass));
  CHECK(!scene.class_matches(Vec3(2.0, 2.0, 0.0), 0.01, 0));
}

TEST_CASE("a box occludes the ground beneath it in nadir views") {
  const SynthScene& scene = box_field();

  // Direct probes of the analytic raycaster.
  const SynthScene::Hit top = scene.raycast(Vec3(30, 25, 50), Vec3(0, 0, -1));
  CHECK(top.valid);
  CHECK(top.t == doctest::Approx(44.0));  // box top at z=6
  CHECK(top.cls == kBuilding);
  const SynthScene::Hit grass = scene.raycast(Vec3(5, 5, 50), Vec3(0, 0, -1));
  CHECK(grass.valid);
  CHECK(grass.t == doctest::Approx(50.0));
  CHECK(grass.cls == kGrass);
  const SynthScene::Hit sky = scene.raycast(Vec3(5, 5, 50), Vec3(0, 0, 1));
  CHECK(!sky.valid);
  CHECK(sky.t == 0.0);
  const SynthScene::Hit outside = scene.raycast(Vec3(200, 200, 10), Vec3(0, 0, -1));
  CHECK(!outside.valid);

  // The same story through a rendered frame directly above the box.
  size_t best = 0;
  double best_d = 1e30;
  for (size_t n = 0; n < scene.frames.size(); ++n) {
    const double d = (scene.frames[n].pose.center() - Vec3(30, 25, 40)).norm();
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  REQUIRE(best_d < 1e-6);
  const DepthMap& depth = scene.depths[best];
  const SemanticMask& mask = scene.masks[best];
  CHECK(mask.classes(32, 24) == kBuilding);
  CHECK(depth(32, 24) == doctest::Approx(34.0).epsilon(1e-6));  // 40 - box height
  CHECK(mask.classes(8, 24) == kGrass);
  CHECK(depth(8, 24) == doctest::Approx(40.0).epsilon(1e-6));
  CHECK(depth(8, 24) > depth(32, 24));
}

TEST_CASE("scene generation is deterministic for a fixed seed") {
  const SynthScene a = generate_scene(desk_scene_spec(7));
  const SynthScene b = generate_scene(desk_scene_spec(7));

  REQUIRE(a.cloud.size() == b.cloud.size());
  CHECK(a.cloud.labels == b.cloud.labels);
  for (size_t i = 0; i < a.cloud.size(); ++i) {
    CHECK(a.cloud.positions[i].x() == b.cloud.positions[i].x());
    CHECK(a.cloud.positions[i].y() == b.cloud.positions[i].y());
    CHECK(a.cloud.positions[i].z() == b.cloud.positions[i].z());
  }
  REQUIRE(a.frames.size() == b.frames.size());
  for (size_t n = 0; n < a.frames.size(); ++n) {
    CHECK(a.frames[n].id == b.frames[n].id);
    CHECK((a.frames[n].pose.rotation - b.frames[n].pose.rotation).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.frames[n].pose.translation - b.frames[n].pose.translation).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(a.depths[n].data == b.depths[n].data);
    CHECK(a.masks[n].classes.data == b.masks[n].classes.data);
  }

  const SynthScene c = generate_scene(desk_scene_spec(8));
  bool any_differs = c.cloud.size() != a.cloud.size();
  for (size_t i = 0; !any_differs && i < a.cloud.size(); ++i)
    any_differs = a.cloud.positions[i] != c.cloud.positions[i];
  CHECK(any_differs);
}

TEST_CASE("scene spec validation rejects inconsistent inputs") {
  const SynthSceneSpec good = desk_scene_spec();
  CHECK_NOTHROW(good.validate());

  const auto broken = [&](auto mutate) {
    SynthSceneSpec s = desk_scene_spec();
    mutate(s);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  };
  broken([](SynthSceneSpec& s) { s.extent_x = 0.0; });
  broken([](SynthSceneSpec& s) { s.points_per_m2 = 0.0; });
  broken([](SynthSceneSpec& s) { s.ground.base_cls = 0; });
  broken([](SynthSceneSpec& s) { s.pattern.passes.clear(); });
  broken([](SynthSceneSpec& s) { s.pattern.passes[0].altitude_m = 0.0; });
  broken([](SynthSceneSpec& s) { s.pattern.passes[0].tilt_deg = -10.0; });
  broken([](SynthSceneSpec& s) { s.pattern.side_overlap = 0.95; });
  broken([](SynthSceneSpec& s) { s.pattern.forward_overlap = 0.01; });
  broken([](SynthSceneSpec& s) { s.pattern.image_width = 4; });
  broken([](SynthSceneSpec& s) { s.pattern.focal_px = 0.0; });
  broken([](SynthSceneSpec& s) { s.primitives[0].cls = 0; });
  broken([](SynthSceneSpec& s) { s.primitives[0].size = Vec3(0, 1, 1); });
  broken([](SynthSceneSpec& s) { s.primitives[0].density_scale = 0.0; });
  broken([](SynthSceneSpec& s) { s.primitives[0].center.x() = -20.0; });
}

TEST_CASE("the bundled scene presets have the advertised shape") {
  const SynthScene& small = desk();
  CHECK(small.frames.size() >= 8);
  CHECK(small.cloud.size() > 10000);
  std::set<std::uint16_t> classes(small.cloud.labels.begin(), small.cloud.labels.end());
  for (std::uint16_t cls : {1, 3, 6, 9, 14, 17, 21}) CHECK(classes.count(cls) == 1);

  const SynthSceneSpec cov = coverage_scene_spec();
  CHECK_NOTHROW(cov.validate());
  const SynthScene big = generate_scene(cov);
  CHECK(big.frames.size() >= 200);  // selection tests need a dense pool
  bool road = false, grass = false;
  for (std::uint16_t cls : big.cloud.labels) {
    road |= cls == kRoad;
    grass |= cls == kGrass;
  }
  CHECK(road);
  CHECK(grass);
}
