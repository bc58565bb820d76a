#include "aerovox/dbscan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace aerovox {

namespace {

// Hash grid with cell edge = eps; all neighbors of a point lie within the
// 3x3x3 cell block around it. Buckets are keyed by the exact cell triple
// (the hash only spreads buckets), so no two cells ever share a bucket and
// every stored index is scanned exactly once per query.
struct EpsGrid {
  using Cell = std::array<std::int64_t, 3>;

  struct CellHash {
    size_t operator()(const Cell& c) const {
      const std::uint64_t h = static_cast<std::uint64_t>(c[0]) * 0x9e3779b97f4a7c15ULL ^
                              static_cast<std::uint64_t>(c[1]) * 0xc2b2ae3d27d4eb4fULL ^
                              static_cast<std::uint64_t>(c[2]) * 0x165667b19e3779f9ULL;
      return static_cast<size_t>(h);
    }
  };

  double inv_eps;
  std::unordered_map<Cell, std::vector<std::uint32_t>, CellHash> cells;

  EpsGrid(const std::vector<Vec3>& points, double eps) : inv_eps(1.0 / eps) {
    cells.reserve(points.size());
    for (std::uint32_t i = 0; i < points.size(); ++i)
      cells[cell_of(points[i])].push_back(i);  // ascending by construction
  }

  Cell cell_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() * inv_eps)),
            static_cast<std::int64_t>(std::floor(p.y() * inv_eps)),
            static_cast<std::int64_t>(std::floor(p.z() * inv_eps))};
  }

  // Indices within eps of points[q] (q itself included), ascending.
  void query(const std::vector<Vec3>& points, std::uint32_t q, double eps2,
             std::vector<std::uint32_t>& out) const {
    out.clear();
    const auto c = cell_of(points[q]);
    for (std::int64_t dz = -1; dz <= 1; ++dz) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          const auto it = cells.find(Cell{c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells.end()) continue;
          for (std::uint32_t i : it->second)
            if ((points[i] - points[q]).squaredNorm() <= eps2) out.push_back(i);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
};

}  // namespace

DbscanResult dbscan(const std::vector<Vec3>& points, double eps, int min_pts) {
  if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be positive");
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");

  const double eps2 = eps * eps;
  const EpsGrid grid(points, eps);

  DbscanResult result;
  result.assignment.assign(points.size(), -1);
  std::vector<std::uint8_t> visited(points.size(), 0);
  std::vector<std::uint32_t> neighbors, expansion;

  for (std::uint32_t seed = 0; seed < points.size(); ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    grid.query(points, seed, eps2, neighbors);
    if (neighbors.size() < static_cast<size_t>(min_pts)) continue;  // noise (for now)

    const std::int32_t cluster = result.num_clusters++;
    result.assignment[seed] = cluster;
    std::deque<std::uint32_t> queue(neighbors.begin(), neighbors.end());
    while (!queue.empty()) {
      const std::uint32_t q = queue.front();
      queue.pop_front();
      if (result.assignment[q] == -1) result.assignment[q] = cluster;  // border or core
      if (visited[q]) continue;
      visited[q] = 1;
      grid.query(points, q, eps2, expansion);
      if (expansion.size() >= static_cast<size_t>(min_pts)) {
        // Skip entries that would no-op on dequeue; pruning them cannot
        // change any assignment, only queue volume.
        for (std::uint32_t e : expansion)
          if (!visited[e] || result.assignment[e] == -1) queue.push_back(e);
      }
    }
  }
  return result;
}

}  // namespace aerovox
