#pragma once

#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

// Pinhole camera. Axes: x right, y down, z forward (optical axis).
// Pixel (u,v) = (column, row) with the origin at the top-left image corner;
// the center of pixel (c,r) is at continuous coordinates (c+0.5, r+0.5).
struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  void validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
      throw std::invalid_argument("CameraIntrinsics: focal lengths must be positive");
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("CameraIntrinsics: image size must be positive");
  }
};

// Rigid world-to-camera transform: x_cam = R * x_world + t.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }

  Vec3 apply(const Vec3& p_world) const { return rotation * p_world + translation; }

  Pose inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  // Camera center expressed in world coordinates.
  Vec3 center() const { return -(rotation.transpose() * translation); }

  void validate(double tol = 1e-9) const {
    const Mat3 err = rotation * rotation.transpose() - Mat3::Identity();
    if (err.cwiseAbs().maxCoeff() > tol || std::abs(rotation.determinant() - 1.0) > tol)
      throw std::invalid_argument("Pose: rotation is not a proper rotation matrix");
  }
};

struct CameraFrame {
  int id = -1;
  CameraIntrinsics intrinsics;
  Pose pose;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // camera-space z; <= 0 means behind the camera
};

// Projects a world point. For depth <= 0 the pixel coordinates are not
// meaningful and are returned as (0,0); callers must check depth first.
inline Projection project(const Vec3& p_world, const CameraFrame& cam) {
  const Vec3 pc = cam.pose.apply(p_world);
  if (pc.z() <= 0.0) return {0.0, 0.0, pc.z()};
  const auto& in = cam.intrinsics;
  return {in.fx * pc.x() / pc.z() + in.cx, in.fy * pc.y() / pc.z() + in.cy, pc.z()};
}

// Inverse of project at a given positive depth; returns the world point.
inline Vec3 back_project(double u, double v, double depth, const CameraFrame& cam) {
  if (!(depth > 0.0)) throw std::invalid_argument("back_project: depth must be positive");
  const auto& in = cam.intrinsics;
  const Vec3 pc(depth * (u - in.cx) / in.fx, depth * (v - in.cy) / in.fy, depth);
  return cam.pose.inverse().apply(pc);
}

// True when the camera-space point projects inside the image and its depth
// lies in [d_min, d_max]. Pixel bounds are half-open: u in [0,W), v in [0,H).
inline bool in_frustum_cam(const Vec3& pc, const CameraIntrinsics& in, double d_min,
                           double d_max) {
  if (pc.z() < d_min || pc.z() > d_max || pc.z() <= 0.0) return false;
  const double u = in.fx * pc.x() / pc.z() + in.cx;
  const double v = in.fy * pc.y() / pc.z() + in.cy;
  return u >= 0.0 && u < in.width && v >= 0.0 && v < in.height;
}

inline bool in_frustum(const Vec3& p_world, const CameraFrame& cam, double d_min,
                       double d_max) {
  return in_frustum_cam(cam.pose.apply(p_world), cam.intrinsics, d_min, d_max);
}

}  // namespace aerovox
