#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/image.hpp"

namespace aerovox {

// 2D-3D associations for one frame: pixel (u,v) observes point `point`.
// Pixels are the integer cells containing the projection, so the projection
// lies within 0.5 px of the pixel center.
struct CorrespondenceSet {
  struct Pair {
    int u = 0;
    int v = 0;
    std::uint32_t point = 0;
  };

  int frame_id = -1;
  std::vector<Pair> pairs;
};

// Occlusion test tolerance: |projected depth - depth map| <= max(relative *
// depth, floor_m). MVS depth noise grows with range, hence the relative term;
// the floor keeps near-field points from being rejected by quantization.
struct DepthTolerance {
  double relative = 0.05;
  double floor_m = 0.5;

  double at(double depth) const { return std::max(relative * depth, floor_m); }
  static DepthTolerance absolute(double meters) { return {0.0, meters}; }
};

// Associates every point that projects inside the image, in front of the
// camera, and within depth tolerance of the frame's depth map. Depth map
// pixels <= 0 (no return) never validate a correspondence.
CorrespondenceSet compute_correspondences(const std::vector<Vec3>& points,
                                          const CameraFrame& frame,
                                          const DepthMap& depth_map,
                                          const DepthTolerance& tol);

}  // namespace aerovox
