#include "aerovox/frame_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace aerovox {

namespace {

struct Anchor {
  double x, y;
};

// Nearest frame to an anchor by squared ground-plane distance; ties by id.
int nearest_frame(const std::vector<CameraFrame>& frames,
                  const std::vector<size_t>& candidates,
                  const std::vector<Eigen::Vector2d>& pos, const Anchor& a) {
  int best_id = std::numeric_limits<int>::max();
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t idx : candidates) {
    const double dx = pos[idx].x() - a.x;
    const double dy = pos[idx].y() - a.y;
    const double d = dx * dx + dy * dy;
    const int id = frames[idx].id;
    if (d < best_d || (d == best_d && id < best_id)) {
      best_d = d;
      best_id = id;
    }
  }
  return best_id;
}

}  // namespace

std::vector<int> stratified_select(const std::vector<CameraFrame>& frames,
                                   double cell_size) {
  if (frames.empty()) throw std::invalid_argument("stratified_select: no frames");
  if (!(cell_size > 0.0)) throw std::invalid_argument("stratified_select: cell_size must be positive");

  std::vector<Eigen::Vector2d> pos(frames.size());
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_y;
  for (size_t i = 0; i < frames.size(); ++i) {
    const Vec3 c = frames[i].pose.center();
    pos[i] = {c.x(), c.y()};
    min_x = std::min(min_x, c.x());
    max_x = std::max(max_x, c.x());
    min_y = std::min(min_y, c.y());
    max_y = std::max(max_y, c.y());
  }

  const int nx = std::max(1, static_cast<int>(std::ceil((max_x - min_x) / cell_size)));
  const int ny = std::max(1, static_cast<int>(std::ceil((max_y - min_y) / cell_size)));

  // Bucket frame indices by cell; clamp so points exactly on the max edge
  // fall into the last cell.
  std::vector<std::vector<size_t>> buckets(static_cast<size_t>(nx) * ny);
  for (size_t i = 0; i < frames.size(); ++i) {
    int gx = static_cast<int>(std::floor((pos[i].x() - min_x) / cell_size));
    int gy = static_cast<int>(std::floor((pos[i].y() - min_y) / cell_size));
    gx = std::clamp(gx, 0, nx - 1);
    gy = std::clamp(gy, 0, ny - 1);
    buckets[static_cast<size_t>(gy) * nx + gx].push_back(i);
  }

  std::set<int> selected;
  for (int gy = 0; gy < ny; ++gy) {
    for (int gx = 0; gx < nx; ++gx) {
      const auto& cell = buckets[static_cast<size_t>(gy) * nx + gx];
      if (cell.empty()) continue;

      const double x_lo = min_x + gx * cell_size;
      const double y_lo = min_y + gy * cell_size;
      selected.insert(nearest_frame(frames, cell, pos,
                                    {x_lo + 0.5 * cell_size, y_lo + 0.5 * cell_size}));

      // Border cells get a second anchor pushed to the outer boundary so the
      // selection does not thin out at the survey edges. Edge cells use the
      // outer edge midpoint; corner cells the outer corner. A cell touching
      // opposite sides (single row or column) uses the low side.
      const bool left = gx == 0, right = gx == nx - 1;
      const bool bottom = gy == 0, top = gy == ny - 1;
      if (left || right || bottom || top) {
        Anchor a{x_lo + 0.5 * cell_size, y_lo + 0.5 * cell_size};
        if (left)
          a.x = x_lo;
        else if (right)
          a.x = x_lo + cell_size;
        if (bottom)
          a.y = y_lo;
        else if (top)
          a.y = y_lo + cell_size;
        selected.insert(nearest_frame(frames, cell, pos, a));
      }
    }
  }
  return {selected.begin(), selected.end()};
}

double coverage(const std::vector<CorrespondenceSet>& per_frame,
                const std::vector<int>& J, size_t M) {
  if (M == 0) throw std::invalid_argument("coverage: M must be >= 1");
  std::unordered_map<int, const CorrespondenceSet*> by_id;
  by_id.reserve(per_frame.size());
  for (const auto& cs : per_frame) by_id[cs.frame_id] = &cs;

  std::vector<bool> seen(M, false);
  for (int id : J) {
    const auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("coverage: unknown frame id " + std::to_string(id));
    for (const auto& pr : it->second->pairs) {
      if (pr.point >= M) throw std::invalid_argument("coverage: point id out of range");
      seen[pr.point] = true;
    }
  }
  const auto observed = std::count(seen.begin(), seen.end(), true);
  return static_cast<double>(observed) / static_cast<double>(M);
}

}  // namespace aerovox
