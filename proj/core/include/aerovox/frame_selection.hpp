#pragma once

#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/correspondence.hpp"

namespace aerovox {

struct SelectionResult {
  std::vector<int> selected;  // frame ids, ascending, deduplicated
  double coverage = 0.0;      // fraction of points observed by the selection
};

// Spatially stratified frame selection. Camera positions are projected onto
// the world z=0 plane and their bounding rectangle is partitioned into square
// cells of `cell_size`. Each cell selects the frame nearest its center;
// border cells additionally select the frame nearest their outer boundary
// anchor (edge midpoint, or the outer corner for corner cells). Distance ties
// go to the smaller frame id. Returns the deduplicated union, ascending.
std::vector<int> stratified_select(const std::vector<CameraFrame>& frames,
                                   double cell_size);

// Fraction of the M reconstructed points observed by at least one frame in J.
// `per_frame` holds one CorrespondenceSet per frame; J references frame ids.
double coverage(const std::vector<CorrespondenceSet>& per_frame,
                const std::vector<int>& J, size_t M);

}  // namespace aerovox
