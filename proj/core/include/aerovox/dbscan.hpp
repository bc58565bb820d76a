#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

struct DbscanResult {
  // Per point: cluster index in [0, num_clusters), or -1 for noise.
  std::vector<std::int32_t> assignment;
  int num_clusters = 0;
};

// Euclidean DBSCAN. Neighborhoods are closed balls (d <= eps) and include
// the point itself when counting against min_pts. Deterministic contract:
// seeds are scanned in ascending index, expansion is breadth-first with
// ascending-index region queries, and border points join the first cluster
// that reaches them. Any implementation honoring this contract produces the
// identical assignment, so the spatial-grid acceleration used here is
// interchangeable with a quadratic scan.
DbscanResult dbscan(const std::vector<Vec3>& points, double eps, int min_pts);

}  // namespace aerovox
