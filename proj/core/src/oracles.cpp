#include "aerovox/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>

namespace aerovox::oracle {

OccupiedSet carve(const InstanceCluster& cluster, const std::vector<VirtualView>& views,
                  const GridSpec& grid, int margin_vox) {
  grid.validate();
  if (views.empty()) throw std::invalid_argument("oracle carve: need at least one view");
  if (margin_vox < 0) throw std::invalid_argument("oracle carve: margin must be >= 0");

  const Vec3 lo = cluster.bbox_min - Vec3::Constant(margin_vox * grid.r);
  const Vec3 hi = cluster.bbox_max + Vec3::Constant(margin_vox * grid.r);

  OccupiedSet out(grid.dims);
  for (int i = 0; i < grid.dims.x(); ++i) {
    for (int j = 0; j < grid.dims.y(); ++j) {
      for (int k = 0; k < grid.dims.z(); ++k) {
        const Vec3 c = voxel_center({i, j, k}, grid);
        if (c.x() < lo.x() || c.x() > hi.x() || c.y() < lo.y() || c.y() > hi.y() ||
            c.z() < lo.z() || c.z() > hi.z())
          continue;
        bool inside = true;
        for (const auto& view : views) {
          const Projection pr = project(c, view.frame);
          if (pr.depth <= 0.0) {
            inside = false;
            break;
          }
          const int px = static_cast<int>(std::floor(pr.u));
          const int py = static_cast<int>(std::floor(pr.v));
          if (!view.silhouette.in_bounds(px, py) || view.silhouette(px, py) == 0) {
            inside = false;
            break;
          }
        }
        if (inside) out.insert({i, j, k}, cluster.cls);
      }
    }
  }
  return out;
}

namespace {

std::uint16_t scan_vote(const std::vector<Vec3>& positions,
                        const std::vector<std::uint16_t>& labels, const Vec3& q, int k,
                        std::uint32_t skip, double epsilon_d, const Taxonomy& taxonomy) {
  std::vector<std::pair<double, std::uint32_t>> all;
  all.reserve(positions.size());
  for (std::uint32_t i = 0; i < positions.size(); ++i) {
    if (i == skip) continue;
    all.emplace_back((positions[i] - q).squaredNorm(), i);
  }
  std::sort(all.begin(), all.end());
  if (all.size() > static_cast<size_t>(k)) all.resize(static_cast<size_t>(k));

  std::map<std::uint16_t, double> weight;
  for (const auto& [d2, idx] : all) weight[labels[idx]] += 1.0 / (std::sqrt(d2) + epsilon_d);
  return argmax_class(weight, taxonomy);
}

constexpr std::uint32_t kNone = 0xffffffffu;

}  // namespace

std::vector<std::uint16_t> knn_assign(const SemanticPointCloud& labeled,
                                      const std::vector<Vec3>& unlabeled, int k,
                                      double epsilon_d, const Taxonomy& taxonomy) {
  labeled.check_consistent();
  if (labeled.size() == 0) throw std::invalid_argument("oracle knn: empty labeled cloud");
  if (k < 1) throw std::invalid_argument("oracle knn: k must be >= 1");

  std::vector<std::uint16_t> out(unlabeled.size(), 0);
  for (size_t q = 0; q < unlabeled.size(); ++q)
    out[q] = scan_vote(labeled.positions, labeled.labels, unlabeled[q], k, kNone, epsilon_d,
                       taxonomy);
  return out;
}

SemanticPointCloud knn_refine(const SemanticPointCloud& cloud, int k, double epsilon_d,
                              const Taxonomy& taxonomy) {
  cloud.check_consistent();
  if (k < 1) throw std::invalid_argument("oracle knn: k must be >= 1");

  SemanticPointCloud out = cloud;
  for (std::uint32_t q = 0; q < cloud.size(); ++q) {
    if (cloud.size() <= 1) break;  // no neighbors: labels stay
    out.labels[q] = scan_vote(cloud.positions, cloud.labels, cloud.positions[q], k, q,
                              epsilon_d, taxonomy);
  }
  return out;
}

namespace {

// Voxel of a sample point at camera depth t along the pixel ray, encoded as a
// linear index, or -1 outside the grid. Evaluated from the analytic position,
// independent of incremental traversal arithmetic.
std::int64_t voxel_at(const FrameGridSpec& spec, double dir_x, double dir_y, double t) {
  const double gi = (t - spec.d_min) / spec.r;
  const double gj = t * dir_x / spec.r + spec.dims.y() / 2.0;
  const double gk = t * dir_y / spec.r + spec.dims.z() / 2.0;
  const auto i = static_cast<std::int64_t>(std::floor(gi));
  const auto j = static_cast<std::int64_t>(std::floor(gj));
  const auto k = static_cast<std::int64_t>(std::floor(gk));
  if (i < 0 || i >= spec.dims.x() || j < 0 || j >= spec.dims.y() || k < 0 ||
      k >= spec.dims.z())
    return -1;
  return (i * spec.dims.y() + j) * spec.dims.z() + k;
}

// Emits every voxel the ray visits in (t0, t1], bisecting each voxel change
// until the crossing is localized; the straight ray meets each convex cell in
// a single interval, so equal endpoints mean no cell in between. Once a
// crossing is bracketed below eps_t the visited cell is re-evaluated a full
// eps_t past the bracket: samples that land exactly on a cell boundary round
// into the corner cell the ray only touches, whereas the nudged point lies
// safely inside the cell actually entered. Crossings closer together than
// eps_t are thereby treated as one simultaneous (diagonal) step.
template <typename Visit>
bool emit_crossings(const FrameGridSpec& spec, double dir_x, double dir_y, double t0,
                    double t1, std::int64_t v0, std::int64_t v1, double eps_t,
                    const Visit& visit) {
  if (v0 == v1) return false;
  if (t1 - t0 <= eps_t) return visit(voxel_at(spec, dir_x, dir_y, t1 + eps_t));
  const double tm = 0.5 * (t0 + t1);
  const std::int64_t vm = voxel_at(spec, dir_x, dir_y, tm);
  if (emit_crossings(spec, dir_x, dir_y, t0, tm, v0, vm, eps_t, visit)) return true;
  return emit_crossings(spec, dir_x, dir_y, tm, t1, vm, v1, eps_t, visit);
}

}  // namespace

Image<std::int32_t> raycast(const FrameGrid& grid, const CameraFrame& frame,
                            int pixel_stride, double step_scale) {
  grid.spec.validate();
  frame.intrinsics.validate();
  if (pixel_stride < 1) throw std::invalid_argument("oracle raycast: stride must be >= 1");
  if (!(step_scale > 0.0)) throw std::invalid_argument("oracle raycast: bad step scale");

  const auto& in = frame.intrinsics;
  const FrameGridSpec& spec = grid.spec;
  Image<std::int32_t> first_hit(in.width, in.height, -1);

  const double t_begin = spec.d_min;
  const double t_end = spec.d_min + spec.depth_extent();
  const double step = spec.r * step_scale;
  const double eps_t = spec.r * 1e-9;

  for (int v = 0; v < in.height; v += pixel_stride) {
    for (int u = 0; u < in.width; u += pixel_stride) {
      const double dir_x = (u + 0.5 - in.cx) / in.fx;
      const double dir_y = (v + 0.5 - in.cy) / in.fy;

      const auto check = [&](std::int64_t vox) {
        if (vox < 0) return false;
        if (grid.labels.labels[static_cast<size_t>(vox)] == 0) return false;
        first_hit(u, v) = static_cast<std::int32_t>(vox);
        return true;
      };

      double t_prev = t_begin;
      std::int64_t v_prev = voxel_at(spec, dir_x, dir_y, t_prev);
      if (check(v_prev)) continue;
      bool done = false;
      for (double t = t_begin + step; !done && t_prev < t_end; t += step) {
        const double t_cur = std::min(t, t_end);
        const std::int64_t v_cur = voxel_at(spec, dir_x, dir_y, t_cur);
        done = emit_crossings(spec, dir_x, dir_y, t_prev, t_cur, v_prev, v_cur, eps_t, check);
        t_prev = t_cur;
        v_prev = v_cur;
        if (t_cur >= t_end) break;
      }
    }
  }
  return first_hit;
}

DbscanResult dbscan(const std::vector<Vec3>& points, double eps, int min_pts) {
  if (!(eps > 0.0)) throw std::invalid_argument("oracle dbscan: eps must be positive");
  if (min_pts < 1) throw std::invalid_argument("oracle dbscan: min_pts must be >= 1");

  const double eps2 = eps * eps;
  const auto neighbors_of = [&](std::uint32_t q) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < points.size(); ++i)
      if ((points[i] - points[q]).squaredNorm() <= eps2) out.push_back(i);
    return out;  // ascending by construction
  };

  DbscanResult result;
  result.assignment.assign(points.size(), -1);
  std::vector<std::uint8_t> visited(points.size(), 0);

  for (std::uint32_t seed = 0; seed < points.size(); ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    const auto neighbors = neighbors_of(seed);
    if (neighbors.size() < static_cast<size_t>(min_pts)) continue;

    const std::int32_t cluster = result.num_clusters++;
    result.assignment[seed] = cluster;
    std::deque<std::uint32_t> queue(neighbors.begin(), neighbors.end());
    while (!queue.empty()) {
      const std::uint32_t q = queue.front();
      queue.pop_front();
      if (result.assignment[q] == -1) result.assignment[q] = cluster;
      if (visited[q]) continue;
      visited[q] = 1;
      const auto expansion = neighbors_of(q);
      if (expansion.size() >= static_cast<size_t>(min_pts))
        for (std::uint32_t e : expansion) queue.push_back(e);
    }
  }
  return result;
}

}  // namespace aerovox::oracle
