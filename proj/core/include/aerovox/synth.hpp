#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/image.hpp"
#include "aerovox/point_cloud.hpp"

namespace aerovox {

// Tilted-plane ground with a straight road strip running along y; everything
// else is the base class.
struct GroundModel {
  double z0 = 0.0;
  double slope_x = 0.0;
  double slope_y = 0.0;
  double road_center_x = 0.0;
  double road_half_width = 0.0;  // 0 disables the road strip
  std::uint16_t road_cls = 0;
  std::uint16_t base_cls = 0;

  double height(double x, double y) const { return z0 + slope_x * x + slope_y * y; }
  std::uint16_t class_at_xy(double x) const {
    if (road_half_width > 0.0 && std::abs(x - road_center_x) <= road_half_width)
      return road_cls;
    return base_cls;
  }
};

struct Primitive {
  enum class Kind { Box, Sphere, Cylinder };
  Kind kind = Kind::Box;
  std::uint16_t cls = 0;
  Vec3 center = Vec3::Zero();  // geometric center
  // Box: full extents. Sphere: x = radius. Cylinder (axis +z): x = radius,
  // z = height.
  Vec3 size = Vec3::Zero();
  double density_scale = 1.0;  // surface sampling boost for small objects
};

// One survey double-grid: two perpendicular serpentine passes at a given
// altitude and camera tilt (-90 = nadir, -75 = oblique).
struct SurveyPass {
  double altitude_m = 0.0;
  double tilt_deg = -90.0;
};

struct CameraPattern {
  std::vector<SurveyPass> passes;
  double side_overlap = 0.67;
  double forward_overlap = 0.74;
  int image_width = 0;
  int image_height = 0;
  double focal_px = 0.0;
};

struct SynthSceneSpec {
  std::uint64_t seed = 1;
  double extent_x = 0.0;  // scene spans [0,extent_x] x [0,extent_y]
  double extent_y = 0.0;
  GroundModel ground;
  std::vector<Primitive> primitives;
  CameraPattern pattern;
  double points_per_m2 = 0.0;

  void validate() const;
};

// Fully synthetic scene: analytically defined geometry plus everything a
// pipeline run needs (ground-truth-labeled points, calibrated frames, ideal
// depth maps and semantic masks rendered from the same analytic model).
struct SynthScene {
  SynthSceneSpec spec;
  SemanticPointCloud cloud;
  std::vector<CameraFrame> frames;
  std::vector<DepthMap> depths;
  std::vector<SemanticMask> masks;

  struct Hit {
    double t = 0.0;  // camera depth when dir has unit camera-z
    std::uint16_t cls = 0;
    bool valid = false;
  };

  // First surface along origin + t*dir (world coordinates), t > 1e-6.
  Hit raycast(const Vec3& origin, const Vec3& dir) const;

  // True when `cls` is within `tol` of the analytic model at p: inside or
  // near the matching primitive, or near the ground surface with the local
  // ground class.
  bool class_matches(const Vec3& p, double tol, std::uint16_t cls) const;

  // Analytic class with instance > others > ground precedence; 0 if nothing
  // is within tol. `instance_first` follows the scene aggregation order so
  // oracle comparisons see the same conflict resolution.
  std::uint16_t class_at(const Vec3& p, double tol) const;
};

SynthScene generate_scene(const SynthSceneSpec& spec);

// Compact mixed scene (ground + buildings + vehicles + trees + rock +
// person) under a single-altitude nadir double-grid; used by the end-to-end
// and determinism tests.
SynthSceneSpec desk_scene_spec(std::uint64_t seed = 7);

// Large pure-ground scene under the full multi-altitude oblique+nadir
// pattern; hundreds of frames for the selection/coverage checks.
SynthSceneSpec coverage_scene_spec(std::uint64_t seed = 11);

}  // namespace aerovox
