#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "aerovox/delaunay.hpp"
#include "aerovox/image.hpp"

namespace aerovox {

// Filled alpha complex of a 2D point set: the Delaunay triangles whose
// circumradius, measured after normalizing the set to the unit square per
// axis, is at most alpha. The filled region generalizes the convex hull
// (alpha -> infinity) and carves concavities wider than ~2*alpha.
// Returns triangles as indices into `points`.
std::vector<std::array<std::uint32_t, 3>> alpha_complex(
    const std::vector<std::array<double, 2>>& points, double alpha);

// Rasterizes filled triangles over an image: a pixel is set when its center
// lies inside (or on the boundary of) any triangle. Vertices are in pixel
// coordinates.
void rasterize_triangles(const std::vector<std::array<double, 2>>& vertices,
                         const std::vector<std::array<std::uint32_t, 3>>& triangles,
                         Image<std::uint8_t>& target);

// 8-neighborhood binary dilation, `radius` passes.
void dilate(Image<std::uint8_t>& img, int radius);

}  // namespace aerovox
