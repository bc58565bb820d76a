#pragma once

#include <array>

#include "aerovox/types.hpp"

namespace aerovox {

// Separating-axis overlap test between a triangle and an axis-aligned box
// (center + half extents). Closed-set semantics: touching counts as overlap,
// which keeps voxelization conservative. Degenerate (zero-area) triangles
// reduce to segment/point vs box and are handled by the same axis tests.
bool tri_box_overlap(const std::array<Vec3, 3>& tri, const Vec3& box_center,
                     const Vec3& box_half);

}  // namespace aerovox
