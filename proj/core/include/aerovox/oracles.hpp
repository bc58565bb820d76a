#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/dbscan.hpp"
#include "aerovox/densify.hpp"
#include "aerovox/gt_sampling.hpp"
#include "aerovox/label_lifting.hpp"

// Deliberately naive reference implementations used to cross-check the
// optimized pipeline kernels. No spatial indices, no early restriction of
// iteration ranges; each follows the operation's definition as directly as
// possible. They live in a separate library so production code cannot link
// them by accident.

namespace aerovox::oracle {

// Tests every voxel of the whole grid: occupied iff its center lies in the
// margin-dilated cluster bbox and projects onto a set silhouette pixel in
// every view.
OccupiedSet carve(const InstanceCluster& cluster, const std::vector<VirtualView>& views,
                  const GridSpec& grid, int margin_vox);

// Quadratic-scan k-nearest-neighbor labeling; neighbors ordered by
// (squared distance, index), same inverse-distance vote as the kd-tree path.
std::vector<std::uint16_t> knn_assign(const SemanticPointCloud& labeled,
                                      const std::vector<Vec3>& unlabeled, int k,
                                      double epsilon_d, const Taxonomy& taxonomy);

SemanticPointCloud knn_refine(const SemanticPointCloud& cloud, int k, double epsilon_d,
                              const Taxonomy& taxonomy);

// Per-pixel first-hit voxel (linear index, -1 for none) by dense sampling
// along each ray at `step_scale * r`, with recursive bisection at every voxel
// change so no cell crossing is skipped.
Image<std::int32_t> raycast(const FrameGrid& grid, const CameraFrame& frame,
                            int pixel_stride = 1, double step_scale = 0.1);

// Textbook quadratic DBSCAN honoring the determinism contract documented on
// aerovox::dbscan.
DbscanResult dbscan(const std::vector<Vec3>& points, double eps, int min_pts);

}  // namespace aerovox::oracle
