#include "aerovox/correspondence.hpp"

#include <cmath>
#include <stdexcept>

namespace aerovox {

CorrespondenceSet compute_correspondences(const std::vector<Vec3>& points,
                                          const CameraFrame& frame,
                                          const DepthMap& depth_map,
                                          const DepthTolerance& tol) {
  const auto& in = frame.intrinsics;
  if (depth_map.width != in.width || depth_map.height != in.height)
    throw std::invalid_argument("compute_correspondences: depth map size != image size");

  CorrespondenceSet out;
  out.frame_id = frame.id;
  for (std::uint32_t m = 0; m < points.size(); ++m) {
    const Projection pr = project(points[m], frame);
    if (pr.depth <= 0.0) continue;
    if (pr.u < 0.0 || pr.u >= in.width || pr.v < 0.0 || pr.v >= in.height) continue;
    const int px = static_cast<int>(std::floor(pr.u));
    const int py = static_cast<int>(std::floor(pr.v));
    const float d = depth_map(px, py);
    if (!(d > 0.0f)) continue;
    if (std::abs(pr.depth - static_cast<double>(d)) <= tol.at(pr.depth))
      out.pairs.push_back({px, py, m});
  }
  return out;
}

}  // namespace aerovox
