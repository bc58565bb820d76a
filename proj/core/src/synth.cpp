#include "aerovox/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aerovox/rng.hpp"
#include "aerovox/taxonomy.hpp"

namespace aerovox {

namespace {

constexpr double kRayEps = 1e-6;

struct PrimHit {
  double t = std::numeric_limits<double>::infinity();
  bool valid = false;
};

// Ray/axis-aligned box via the slab method; reports the entry distance only
// (survey cameras are always outside the primitives).
PrimHit intersect_box(const Vec3& o, const Vec3& d, const Vec3& center, const Vec3& half) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double lo = center[a] - half[a];
    const double hi = center[a] + half[a];
    if (d[a] == 0.0) {
      if (o[a] < lo || o[a] > hi) return {};
      continue;
    }
    double ta = (lo - o[a]) / d[a];
    double tb = (hi - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return {};
  }
  if (t0 <= kRayEps || !std::isfinite(t0)) return {};
  return {t0, true};
}

PrimHit intersect_sphere(const Vec3& o, const Vec3& d, const Vec3& center, double radius) {
  const Vec3 oc = o - center;
  const double a = d.dot(d);
  const double b = d.dot(oc);
  const double c = oc.dot(oc) - radius * radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return {};
  const double t = (-b - std::sqrt(disc)) / a;
  if (t <= kRayEps) return {};
  return {t, true};
}

PrimHit intersect_cylinder(const Vec3& o, const Vec3& d, const Vec3& center, double radius,
                           double height) {
  const double hz = 0.5 * height;
  double best = std::numeric_limits<double>::infinity();
  const double ox = o.x() - center.x();
  const double oy = o.y() - center.y();
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 0.0) {
    const double b = d.x() * ox + d.y() * oy;
    const double c = ox * ox + oy * oy - radius * radius;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double t = (-b - std::sqrt(disc)) / a;
      if (t > kRayEps && std::abs(o.z() + t * d.z() - center.z()) <= hz) best = t;
    }
  }
  if (d.z() != 0.0) {
    for (const double zcap : {center.z() - hz, center.z() + hz}) {
      const double t = (zcap - o.z()) / d.z();
      if (t <= kRayEps || t >= best) continue;
      const double px = ox + t * d.x();
      const double py = oy + t * d.y();
      if (px * px + py * py <= radius * radius) best = t;
    }
  }
  if (!std::isfinite(best)) return {};
  return {best, true};
}

PrimHit intersect_primitive(const Vec3& o, const Vec3& d, const Primitive& prim) {
  switch (prim.kind) {
    case Primitive::Kind::Box:
      return intersect_box(o, d, prim.center, 0.5 * prim.size);
    case Primitive::Kind::Sphere:
      return intersect_sphere(o, d, prim.center, prim.size.x());
    case Primitive::Kind::Cylinder:
      return intersect_cylinder(o, d, prim.center, prim.size.x(), prim.size.z());
  }
  return {};
}

bool primitive_near(const Primitive& prim, const Vec3& p, double tol) {
  const Vec3 rel = p - prim.center;
  switch (prim.kind) {
    case Primitive::Kind::Box: {
      const Vec3 half = 0.5 * prim.size;
      return std::abs(rel.x()) <= half.x() + tol && std::abs(rel.y()) <= half.y() + tol &&
             std::abs(rel.z()) <= half.z() + tol;
    }
    case Primitive::Kind::Sphere:
      return rel.norm() <= prim.size.x() + tol;
    case Primitive::Kind::Cylinder:
      return std::hypot(rel.x(), rel.y()) <= prim.size.x() + tol &&
             std::abs(rel.z()) <= 0.5 * prim.size.z() + tol;
  }
  return false;
}

// True when the xy footprint of the primitive shadows the ground point; only
// primitives that stand on the ground punch holes in the ground sampling.
bool footprint_covers(const Primitive& prim, double x, double y) {
  const double dx = x - prim.center.x();
  const double dy = y - prim.center.y();
  switch (prim.kind) {
    case Primitive::Kind::Box:
      return std::abs(dx) <= 0.5 * prim.size.x() && std::abs(dy) <= 0.5 * prim.size.y();
    case Primitive::Kind::Cylinder:
      return std::hypot(dx, dy) <= prim.size.x();
    case Primitive::Kind::Sphere:
      return false;  // canopy-style: ground continues underneath
  }
  return false;
}

// World-to-camera pose for a survey shot: the image looks along the flight
// heading tilted down by `tilt_deg` (-90 = straight down) and image-down is
// aligned with the heading so forward overlap acts along the flight line.
Pose survey_pose(const Vec3& eye, const Vec3& heading, double tilt_deg) {
  const double off = (90.0 + tilt_deg) * std::numbers::pi / 180.0;
  const Vec3 forward = std::sin(off) * heading - std::cos(off) * Vec3(0, 0, 1);
  const Vec3 down = std::cos(off) * heading + std::sin(off) * Vec3(0, 0, 1);
  const Vec3 right = down.cross(forward).normalized();
  Pose pose;
  pose.rotation.row(0) = right;
  pose.rotation.row(1) = down.normalized();
  pose.rotation.row(2) = forward.normalized();
  pose.translation = -(pose.rotation * eye);
  return pose;
}

void sample_box(const Primitive& prim, double density, Rng& rng, SemanticPointCloud& cloud) {
  const Vec3 half = 0.5 * prim.size;
  const Vec3& c = prim.center;
  const double sx = prim.size.x(), sy = prim.size.y(), sz = prim.size.z();
  struct Face {
    double area;
    Vec3 origin, du, dv;
  };
  // Top plus the four sides; the bottom face rests on the ground.
  const Face faces[5] = {
      {sx * sy, {c.x() - half.x(), c.y() - half.y(), c.z() + half.z()}, {sx, 0, 0}, {0, sy, 0}},
      {sy * sz, {c.x() + half.x(), c.y() - half.y(), c.z() - half.z()}, {0, sy, 0}, {0, 0, sz}},
      {sy * sz, {c.x() - half.x(), c.y() - half.y(), c.z() - half.z()}, {0, sy, 0}, {0, 0, sz}},
      {sx * sz, {c.x() - half.x(), c.y() + half.y(), c.z() - half.z()}, {sx, 0, 0}, {0, 0, sz}},
      {sx * sz, {c.x() - half.x(), c.y() - half.y(), c.z() - half.z()}, {sx, 0, 0}, {0, 0, sz}},
  };
  for (const Face& f : faces) {
    const auto n = static_cast<size_t>(std::ceil(f.area * density * prim.density_scale));
    for (size_t i = 0; i < n; ++i) {
      const double u = rng.next_double();
      const double v = rng.next_double();
      cloud.push_back(f.origin + u * f.du + v * f.dv, prim.cls);
    }
  }
}

void sample_sphere(const Primitive& prim, double density, Rng& rng, SemanticPointCloud& cloud) {
  const double r = prim.size.x();
  const double area = 4.0 * std::numbers::pi * r * r;
  const auto n = static_cast<size_t>(std::ceil(area * density * prim.density_scale));
  for (size_t i = 0; i < n; ++i) {
    const double z = r * (1.0 - 2.0 * rng.next_double());
    const double phi = 2.0 * std::numbers::pi * rng.next_double();
    const double rxy = std::sqrt(std::max(0.0, r * r - z * z));
    cloud.push_back(prim.center + Vec3(rxy * std::cos(phi), rxy * std::sin(phi), z), prim.cls);
  }
}

void sample_cylinder(const Primitive& prim, double density, Rng& rng, SemanticPointCloud& cloud) {
  const double r = prim.size.x();
  const double h = prim.size.z();
  const auto n_side =
      static_cast<size_t>(std::ceil(2.0 * std::numbers::pi * r * h * density * prim.density_scale));
  for (size_t i = 0; i < n_side; ++i) {
    const double phi = 2.0 * std::numbers::pi * rng.next_double();
    const double z = prim.center.z() - 0.5 * h + h * rng.next_double();
    cloud.push_back(Vec3(prim.center.x() + r * std::cos(phi), prim.center.y() + r * std::sin(phi), z),
                    prim.cls);
  }
  const auto n_cap = static_cast<size_t>(std::ceil(std::numbers::pi * r * r * density * prim.density_scale));
  for (size_t i = 0; i < n_cap; ++i) {
    const double rr = r * std::sqrt(rng.next_double());
    const double phi = 2.0 * std::numbers::pi * rng.next_double();
    cloud.push_back(Vec3(prim.center.x() + rr * std::cos(phi), prim.center.y() + rr * std::sin(phi),
                         prim.center.z() + 0.5 * h),
                    prim.cls);
  }
}

}  // namespace

void SynthSceneSpec::validate() const {
  if (!(extent_x > 0.0) || !(extent_y > 0.0))
    throw std::invalid_argument("synth: extent must be positive");
  if (!(points_per_m2 > 0.0)) throw std::invalid_argument("synth: density must be positive");
  if (ground.base_cls == 0) throw std::invalid_argument("synth: ground base class missing");
  if (pattern.passes.empty()) throw std::invalid_argument("synth: no survey passes");
  for (const SurveyPass& pass : pattern.passes) {
    if (!(pass.altitude_m > 0.0)) throw std::invalid_argument("synth: altitude must be positive");
    if (pass.tilt_deg < -90.0 || pass.tilt_deg > -15.0)
      throw std::invalid_argument("synth: tilt must lie in [-90,-15] degrees");
  }
  if (pattern.side_overlap <= 0.05 || pattern.side_overlap >= 0.95 ||
      pattern.forward_overlap <= 0.05 || pattern.forward_overlap >= 0.95)
    throw std::invalid_argument("synth: overlaps must lie in (0.05,0.95)");
  if (pattern.image_width < 8 || pattern.image_height < 8)
    throw std::invalid_argument("synth: image too small");
  if (!(pattern.focal_px > 0.0)) throw std::invalid_argument("synth: focal must be positive");
  for (const Primitive& prim : primitives) {
    if (prim.cls == 0) throw std::invalid_argument("synth: primitive class missing");
    if (!(prim.size.minCoeff() > 0.0))
      throw std::invalid_argument("synth: primitive size must be positive");
    if (!(prim.density_scale > 0.0))
      throw std::invalid_argument("synth: density scale must be positive");
    const double rx = prim.kind == Primitive::Kind::Box ? 0.5 * prim.size.x() : prim.size.x();
    const double ry = prim.kind == Primitive::Kind::Box ? 0.5 * prim.size.y() : prim.size.x();
    if (prim.center.x() - rx < 0.0 || prim.center.x() + rx > extent_x ||
        prim.center.y() - ry < 0.0 || prim.center.y() + ry > extent_y)
      throw std::invalid_argument("synth: primitive leaves the scene extent");
  }
}

SynthScene::Hit SynthScene::raycast(const Vec3& origin, const Vec3& dir) const {
  Hit best;
  best.t = std::numeric_limits<double>::infinity();
  for (const Primitive& prim : spec.primitives) {
    const PrimHit h = intersect_primitive(origin, dir, prim);
    if (h.valid && h.t < best.t) {
      best.t = h.t;
      best.cls = prim.cls;
      best.valid = true;
    }
  }
  const GroundModel& g = spec.ground;
  const double denom = dir.z() - g.slope_x * dir.x() - g.slope_y * dir.y();
  if (denom != 0.0) {
    const double t = (g.height(origin.x(), origin.y()) - origin.z()) / denom;
    if (t > kRayEps && t < best.t) {
      const double x = origin.x() + t * dir.x();
      const double y = origin.y() + t * dir.y();
      if (x >= 0.0 && x <= spec.extent_x && y >= 0.0 && y <= spec.extent_y) {
        best.t = t;
        best.cls = g.class_at_xy(x);
        best.valid = true;
      }
    }
  }
  if (!best.valid) best.t = 0.0;
  return best;
}

bool SynthScene::class_matches(const Vec3& p, double tol, std::uint16_t cls) const {
  if (cls == 0) return false;
  for (const Primitive& prim : spec.primitives)
    if (prim.cls == cls && primitive_near(prim, p, tol)) return true;
  const GroundModel& g = spec.ground;
  if (std::abs(p.z() - g.height(p.x(), p.y())) <= tol && p.x() >= -tol &&
      p.x() <= spec.extent_x + tol && p.y() >= -tol && p.y() <= spec.extent_y + tol) {
    if (cls == g.class_at_xy(p.x())) return true;
    // Near the road boundary either side of the strip is acceptable.
    if (g.road_half_width > 0.0) {
      const double off = std::abs(p.x() - g.road_center_x);
      if (cls == g.road_cls && off <= g.road_half_width + tol) return true;
      if (cls == g.base_cls && off >= g.road_half_width - tol) return true;
    }
  }
  return false;
}

std::uint16_t SynthScene::class_at(const Vec3& p, double tol) const {
  static const Taxonomy tax = Taxonomy::aerial_default();
  for (ClassGroup grp : {ClassGroup::Instance, ClassGroup::Others}) {
    for (const Primitive& prim : spec.primitives)
      if (tax.group(prim.cls) == grp && primitive_near(prim, p, tol)) return prim.cls;
  }
  const GroundModel& g = spec.ground;
  if (std::abs(p.z() - g.height(p.x(), p.y())) <= tol && p.x() >= -tol &&
      p.x() <= spec.extent_x + tol && p.y() >= -tol && p.y() <= spec.extent_y + tol)
    return g.class_at_xy(p.x());
  return 0;
}

SynthScene generate_scene(const SynthSceneSpec& spec) {
  spec.validate();
  SynthScene scene;
  scene.spec = spec;
  Rng rng(spec.seed);

  // Points: ground first, then each primitive in declaration order. Every
  // candidate draw consumes the same RNG values whether kept or not.
  const double area = spec.extent_x * spec.extent_y;
  const auto n_ground = static_cast<size_t>(std::ceil(area * spec.points_per_m2));
  for (size_t i = 0; i < n_ground; ++i) {
    const double x = rng.uniform(0.0, spec.extent_x);
    const double y = rng.uniform(0.0, spec.extent_y);
    bool covered = false;
    for (const Primitive& prim : spec.primitives)
      if (footprint_covers(prim, x, y)) {
        covered = true;
        break;
      }
    if (covered) continue;
    scene.cloud.push_back(Vec3(x, y, spec.ground.height(x, y)), spec.ground.class_at_xy(x));
  }
  for (const Primitive& prim : spec.primitives) {
    switch (prim.kind) {
      case Primitive::Kind::Box:
        sample_box(prim, spec.points_per_m2, rng, scene.cloud);
        break;
      case Primitive::Kind::Sphere:
        sample_sphere(prim, spec.points_per_m2, rng, scene.cloud);
        break;
      case Primitive::Kind::Cylinder:
        sample_cylinder(prim, spec.points_per_m2, rng, scene.cloud);
        break;
    }
  }
  scene.cloud.check_consistent();

  // Cameras: per pass, two perpendicular serpentine grids. Spacing comes from
  // the nadir footprint at the pass altitude; grids are centered on the
  // extent so the borders are flown over, not just grazed.
  const CameraPattern& pat = spec.pattern;
  CameraIntrinsics intr;
  intr.fx = intr.fy = pat.focal_px;
  intr.cx = 0.5 * pat.image_width;
  intr.cy = 0.5 * pat.image_height;
  intr.width = pat.image_width;
  intr.height = pat.image_height;
  int next_id = 1;
  for (const SurveyPass& pass : pat.passes) {
    const double fw = pass.altitude_m * pat.image_width / pat.focal_px;
    const double fh = pass.altitude_m * pat.image_height / pat.focal_px;
    const double d_side = (1.0 - pat.side_overlap) * fw;
    const double d_fwd = (1.0 - pat.forward_overlap) * fh;
    const auto grid = [&](const Vec3& heading, double step_x, double step_y) {
      const int nx = static_cast<int>(std::floor(spec.extent_x / step_x)) + 1;
      const int ny = static_cast<int>(std::floor(spec.extent_y / step_y)) + 1;
      const double x0 = 0.5 * (spec.extent_x - (nx - 1) * step_x);
      const double y0 = 0.5 * (spec.extent_y - (ny - 1) * step_y);
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
          const double x = x0 + ix * step_x;
          const double y = y0 + iy * step_y;
          CameraFrame frame;
          frame.id = next_id++;
          frame.intrinsics = intr;
          frame.pose = survey_pose(Vec3(x, y, spec.ground.height(x, y) + pass.altitude_m),
                                   heading, pass.tilt_deg);
          scene.frames.push_back(frame);
        }
    };
    grid(Vec3(0, 1, 0), d_side, d_fwd);  // fly along y, side-step in x
    grid(Vec3(1, 0, 0), d_fwd, d_side);  // fly along x, side-step in y
  }

  // Ideal depth maps and semantic masks from the analytic model. Rays carry
  // unit camera-z direction so the ray parameter is the camera depth.
  scene.depths.reserve(scene.frames.size());
  scene.masks.reserve(scene.frames.size());
  for (const CameraFrame& frame : scene.frames) {
    const Mat3 r_cw = frame.pose.rotation.transpose();
    const Vec3 c = frame.pose.center();
    DepthMap depth(intr.width, intr.height, 0.0f);
    SemanticMask mask;
    mask.frame_id = frame.id;
    mask.classes = Image<std::uint8_t>(intr.width, intr.height, 0);
    for (int v = 0; v < intr.height; ++v)
      for (int u = 0; u < intr.width; ++u) {
        const Vec3 dir_cam((u + 0.5 - intr.cx) / intr.fx, (v + 0.5 - intr.cy) / intr.fy, 1.0);
        const SynthScene::Hit hit = scene.raycast(c, r_cw * dir_cam);
        if (hit.valid) {
          depth(u, v) = static_cast<float>(hit.t);
          mask.classes(u, v) = static_cast<std::uint8_t>(hit.cls);
        }
      }
    scene.depths.push_back(std::move(depth));
    scene.masks.push_back(std::move(mask));
  }
  return scene;
}

SynthSceneSpec desk_scene_spec(std::uint64_t seed) {
  SynthSceneSpec s;
  s.seed = seed;
  s.extent_x = 64.0;
  s.extent_y = 48.0;
  s.ground = {0.0, 0.01, 0.005, 32.0, 4.0, 14, 9};  // road strip in grass
  s.points_per_m2 = 20.0;

  const auto ground_z = [&](double x, double y) { return s.ground.height(x, y); };
  const auto box = [&](std::uint16_t cls, double x, double y, const Vec3& size, double scale) {
    Primitive p;
    p.kind = Primitive::Kind::Box;
    p.cls = cls;
    p.size = size;
    p.center = Vec3(x, y, ground_z(x, y) + 0.5 * size.z() - 0.05);
    p.density_scale = scale;
    return p;
  };
  s.primitives.push_back(box(1, 16.0, 16.0, Vec3(10.0, 8.0, 6.0), 1.0));   // building
  s.primitives.push_back(box(1, 48.0, 30.0, Vec3(12.0, 9.0, 8.0), 1.0));   // building
  s.primitives.push_back(box(3, 30.5, 10.0, Vec3(4.2, 1.9, 1.6), 1.5));    // vehicle
  s.primitives.push_back(box(3, 33.5, 24.0, Vec3(4.2, 1.9, 1.6), 1.5));    // vehicle
  s.primitives.push_back(box(3, 30.8, 38.0, Vec3(4.2, 1.9, 1.6), 1.5));    // vehicle

  Primitive person;
  person.kind = Primitive::Kind::Cylinder;
  person.cls = 6;
  person.size = Vec3(0.25, 0.25, 1.7);
  person.center = Vec3(34.0, 30.0, ground_z(34.0, 30.0) + 0.85);
  person.density_scale = 3.0;
  s.primitives.push_back(person);

  const auto canopy = [&](std::uint16_t cls, double x, double y, double r, double lift) {
    Primitive p;
    p.kind = Primitive::Kind::Sphere;
    p.cls = cls;
    p.size = Vec3(r, r, r);
    p.center = Vec3(x, y, ground_z(x, y) + lift);
    return p;
  };
  s.primitives.push_back(canopy(17, 8.0, 36.0, 2.0, 3.0));   // tree
  s.primitives.push_back(canopy(17, 56.0, 10.0, 1.8, 2.6));  // tree
  s.primitives.push_back(canopy(21, 40.0, 42.0, 1.0, 0.5));  // rock

  s.pattern.passes = {{40.0, -90.0}};
  s.pattern.image_width = 96;
  s.pattern.image_height = 72;
  s.pattern.focal_px = 60.0;
  return s;
}

SynthSceneSpec coverage_scene_spec(std::uint64_t seed) {
  SynthSceneSpec s;
  s.seed = seed;
  s.extent_x = 150.0;
  s.extent_y = 120.0;
  s.ground = {2.0, 0.004, -0.003, 75.0, 5.0, 14, 9};
  s.points_per_m2 = 1.5;
  s.pattern.passes = {{50.0, -75.0}, {50.0, -90.0}, {40.0, -70.0},
                      {40.0, -90.0}, {30.0, -75.0}, {30.0, -90.0}};
  s.pattern.image_width = 64;
  s.pattern.image_height = 48;
  s.pattern.focal_px = 40.0;
  return s;
}

}  // namespace aerovox
