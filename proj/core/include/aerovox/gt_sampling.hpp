#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/grid.hpp"
#include "aerovox/image.hpp"

namespace aerovox {

// Camera-anchored voxel grid for per-frame ground truth. dims = (X,Y,Z)
// counts along (optical axis, image-right, image-down): the grid starts at
// depth d_min and extends X*r forward, while the right/down axes are
// centered on the optical axis.
struct FrameGridSpec {
  Vec3i dims{0, 0, 0};
  double r = 0.0;
  double d_min = 0.5;

  double depth_extent() const { return dims.x() * r; }
  double d_max_default() const { return d_min + depth_extent(); }

  // Center of voxel (i,j,k) in camera coordinates.
  Vec3 center_cam(int i, int j, int k) const {
    return {(j + 0.5 - dims.y() / 2.0) * r, (k + 0.5 - dims.z() / 2.0) * r,
            d_min + (i + 0.5) * r};
  }

  void validate() const {
    if (dims.minCoeff() <= 0)
      throw std::invalid_argument("FrameGridSpec: dims must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("FrameGridSpec: voxel size must be positive");
    if (d_min < 0.0) throw std::invalid_argument("FrameGridSpec: d_min must be >= 0");
  }
};

struct FrameGrid {
  FrameGridSpec spec;
  int frame_id = -1;
  LabelVolume labels;
};

struct MaskVolume {
  BitVolume invalid;
  BitVolume surface;
  BitVolume occluded;
};

// Samples the scene grid at every frame-grid voxel center inside the
// truncated frustum (pixel bounds [0,W)x[0,H), depth in [d_min, d_max]);
// centers outside the frustum or outside the scene grid read as 0.
FrameGrid frustum_cull(const SceneGrid& scene, const CameraFrame& frame,
                       const FrameGridSpec& spec, double d_max);

// 1 exactly where the voxel center fails the frustum test above.
BitVolume invalid_mask(const CameraFrame& frame, const FrameGridSpec& spec, double d_max);

// 1 where an occupied voxel has an empty 6-neighbor; grid-boundary voxels
// treat missing neighbors as empty.
BitVolume surface_mask(const FrameGrid& grid);

// Per-pixel ray traversal output. Rays start at the camera center through
// pixel centers and are parameterized by camera depth, so hit values are
// metric depths directly.
struct RayTrace {
  Image<std::int32_t> first_hit;   // linear voxel index of first occupied hit, -1 none
  DepthMap depth;                  // depth at which the ray enters that voxel, 0 none
  BitVolume behind_first;          // occupied voxels seen beyond a ray's own first hit
  BitVolume first_hit_set;         // union of first-hit voxels over all rays
};

// Walks every (strided) pixel ray front to back through the frame grid,
// visiting exactly the voxels whose cells the ray intersects, in order.
RayTrace trace_rays(const FrameGrid& grid, const CameraFrame& frame, int pixel_stride = 1);

// Occupied voxels that lie behind some ray's first hit and are themselves
// nobody's first hit (visibility wins conflicts between rays).
BitVolume occluded_mask(const FrameGrid& grid, const CameraFrame& frame,
                        int pixel_stride = 1);

// Depth of the first occupied voxel along each pixel ray; 0 where the ray
// hits nothing.
DepthMap render_depth(const FrameGrid& grid, const CameraFrame& frame);

struct FrameSample {
  FrameGrid grid;
  MaskVolume masks;
  DepthMap depth;
};

// Full extraction for one frame: culled labels, the three masks, depth.
FrameSample sample_frame(const SceneGrid& scene, const CameraFrame& frame,
                         const FrameGridSpec& spec, double d_max, int pixel_stride = 1);

// Runs the full per-frame extraction for every frame.
std::vector<FrameSample> sample_all(const SceneGrid& scene,
                                    const std::vector<CameraFrame>& frames,
                                    const FrameGridSpec& spec, double d_max,
                                    int pixel_stride = 1, int threads = 1);

}  // namespace aerovox
