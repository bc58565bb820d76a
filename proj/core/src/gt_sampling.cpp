#include "aerovox/gt_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aerovox/parallel.hpp"

namespace aerovox {

FrameGrid frustum_cull(const SceneGrid& scene, const CameraFrame& frame,
                       const FrameGridSpec& spec, double d_max) {
  spec.validate();
  frame.intrinsics.validate();
  if (!(d_max > spec.d_min)) throw std::invalid_argument("frustum_cull: d_max <= d_min");
  if (!frame.pose.rotation.allFinite() || !frame.pose.translation.allFinite())
    throw std::invalid_argument("frustum_cull: non-finite pose");

  FrameGrid out;
  out.spec = spec;
  out.frame_id = frame.id;
  out.labels = LabelVolume(spec.dims);

  const Mat3 r_wc = frame.pose.rotation.transpose();
  const Vec3 cam_center = frame.pose.center();
  for (int i = 0; i < spec.dims.x(); ++i) {
    for (int j = 0; j < spec.dims.y(); ++j) {
      for (int k = 0; k < spec.dims.z(); ++k) {
        const Vec3 pc = spec.center_cam(i, j, k);
        if (!in_frustum_cam(pc, frame.intrinsics, spec.d_min, d_max)) continue;
        const Vec3 pw = r_wc * pc + cam_center;
        out.labels.at(i, j, k) = scene.label_at(pw);
      }
    }
  }
  return out;
}

BitVolume invalid_mask(const CameraFrame& frame, const FrameGridSpec& spec, double d_max) {
  spec.validate();
  frame.intrinsics.validate();
  if (!(d_max > spec.d_min)) throw std::invalid_argument("invalid_mask: d_max <= d_min");

  BitVolume mask(spec.dims);
  for (int i = 0; i < spec.dims.x(); ++i)
    for (int j = 0; j < spec.dims.y(); ++j)
      for (int k = 0; k < spec.dims.z(); ++k)
        if (!in_frustum_cam(spec.center_cam(i, j, k), frame.intrinsics, spec.d_min, d_max))
          mask.set(i, j, k, true);
  return mask;
}

BitVolume surface_mask(const FrameGrid& grid) {
  const Vec3i& d = grid.spec.dims;
  BitVolume mask(d);
  const auto occupied = [&](int i, int j, int k) {
    if (i < 0 || i >= d.x() || j < 0 || j >= d.y() || k < 0 || k >= d.z()) return false;
    return grid.labels.at(i, j, k) != 0;
  };
  for (int i = 0; i < d.x(); ++i) {
    for (int j = 0; j < d.y(); ++j) {
      for (int k = 0; k < d.z(); ++k) {
        if (grid.labels.at(i, j, k) == 0) continue;
        const bool boundary = !occupied(i - 1, j, k) || !occupied(i + 1, j, k) ||
                              !occupied(i, j - 1, k) || !occupied(i, j + 1, k) ||
                              !occupied(i, j, k - 1) || !occupied(i, j, k + 1);
        if (boundary) mask.set(i, j, k, true);
      }
    }
  }
  return mask;
}

RayTrace trace_rays(const FrameGrid& grid, const CameraFrame& frame, int pixel_stride) {
  grid.spec.validate();
  frame.intrinsics.validate();
  if (pixel_stride < 1) throw std::invalid_argument("trace_rays: stride must be >= 1");

  const auto& in = frame.intrinsics;
  const Vec3i& dims = grid.spec.dims;
  RayTrace out;
  out.first_hit = Image<std::int32_t>(in.width, in.height, -1);
  out.depth = DepthMap(in.width, in.height, 0.0f);
  out.behind_first = BitVolume(dims);
  out.first_hit_set = BitVolume(dims);

  // Ray through a pixel center in camera space, parameterized by depth z:
  // p(t) = t * ((u-cx)/fx, (v-cy)/fy, 1). Converted to grid index space
  // where voxel (i,j,k) spans [i,i+1) etc. along (depth, right, down).
  const double o_i = -grid.spec.d_min / grid.spec.r;
  const double o_j = dims.y() / 2.0;
  const double o_k = dims.z() / 2.0;

  for (int py = 0; py < in.height; py += pixel_stride) {
    for (int px = 0; px < in.width; px += pixel_stride) {
      const double dir_x = (px + 0.5 - in.cx) / in.fx;
      const double dir_y = (py + 0.5 - in.cy) / in.fy;
      const double o[3] = {o_i, o_j, o_k};
      const double d[3] = {1.0 / grid.spec.r, dir_x / grid.spec.r, dir_y / grid.spec.r};
      const int n[3] = {dims.x(), dims.y(), dims.z()};

      // Clip to the grid box [0,n] per axis.
      double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
      bool miss = false;
      for (int a = 0; a < 3 && !miss; ++a) {
        if (d[a] == 0.0) {
          miss = o[a] < 0.0 || o[a] > n[a];
          continue;
        }
        double lo = (0.0 - o[a]) / d[a];
        double hi = (n[a] - o[a]) / d[a];
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
      }
      if (miss || t1 <= t0) continue;

      int v[3], step[3];
      double t_max[3];
      // Crossing times are recomputed from the plane coordinate instead of
      // accumulated, so they carry no drift; crossings closer together than
      // eps_tie are still treated as simultaneous, because a ray through a
      // cell edge or corner yields crossing times that are equal in exact
      // arithmetic but may differ by a few ulps once the direction components
      // have been rounded.
      const double eps_tie = grid.spec.r * 1e-9;
      const auto next_crossing = [&](int a) {
        if (step[a] == 0) return std::numeric_limits<double>::infinity();
        const double plane = step[a] > 0 ? v[a] + 1.0 : v[a];
        return (plane - o[a]) / d[a];
      };
      for (int a = 0; a < 3; ++a) {
        v[a] = std::clamp(static_cast<int>(std::floor(o[a] + t0 * d[a])), 0, n[a] - 1);
        step[a] = d[a] > 0.0 ? 1 : (d[a] < 0.0 ? -1 : 0);
      }
      for (int a = 0; a < 3; ++a) t_max[a] = next_crossing(a);

      double t_enter = t0;
      bool found_first = false;
      while (true) {
        if (grid.labels.at(v[0], v[1], v[2]) != 0) {
          if (!found_first) {
            found_first = true;
            const auto lin = linear_index(dims, v[0], v[1], v[2]);
            out.first_hit(px, py) = static_cast<std::int32_t>(lin);
            out.depth(px, py) = static_cast<float>(t_enter);
            out.first_hit_set.set(v[0], v[1], v[2], true);
          } else {
            out.behind_first.set(v[0], v[1], v[2], true);
          }
        }
        int axis = 0;
        if (t_max[1] < t_max[axis]) axis = 1;
        if (t_max[2] < t_max[axis]) axis = 2;
        const double t_next = t_max[axis];
        if (t_next >= t1) break;
        t_enter = t_next;
        // A ray crossing several boundary planes at the same parameter passes
        // through a cell edge or corner: the cells it occupies for a positive
        // stretch jump diagonally, so every tied axis advances in one step and
        // the corner cell the ray merely touches is never visited.
        bool left_grid = false;
        for (int a = 0; a < 3; ++a) {
          if (t_max[a] > t_next + eps_tie) continue;
          v[a] += step[a];
          if (v[a] < 0 || v[a] >= n[a]) left_grid = true;
          t_max[a] = next_crossing(a);
        }
        if (left_grid) break;
      }
    }
  }
  return out;
}

namespace {

BitVolume occluded_from(const RayTrace& trace, const Vec3i& dims) {
  BitVolume out(dims);
  for (size_t b = 0; b < out.bytes.size(); ++b)
    out.bytes[b] = trace.behind_first.bytes[b] &
                   static_cast<std::uint8_t>(~trace.first_hit_set.bytes[b]);
  return out;
}

}  // namespace

BitVolume occluded_mask(const FrameGrid& grid, const CameraFrame& frame, int pixel_stride) {
  return occluded_from(trace_rays(grid, frame, pixel_stride), grid.spec.dims);
}

DepthMap render_depth(const FrameGrid& grid, const CameraFrame& frame) {
  return trace_rays(grid, frame, 1).depth;
}

FrameSample sample_frame(const SceneGrid& scene, const CameraFrame& frame,
                         const FrameGridSpec& spec, double d_max, int pixel_stride) {
  FrameSample s;
  s.grid = frustum_cull(scene, frame, spec, d_max);
  s.masks.invalid = invalid_mask(frame, spec, d_max);
  s.masks.surface = surface_mask(s.grid);
  const RayTrace trace = trace_rays(s.grid, frame, pixel_stride);
  s.masks.occluded = occluded_from(trace, spec.dims);
  s.depth = trace.depth;
  return s;
}

std::vector<FrameSample> sample_all(const SceneGrid& scene,
                                    const std::vector<CameraFrame>& frames,
                                    const FrameGridSpec& spec, double d_max,
                                    int pixel_stride, int threads) {
  if (frames.empty()) throw std::invalid_argument("sample_all: no frames");
  std::vector<FrameSample> samples(frames.size());
  parallel_for(frames.size(), threads, [&](size_t begin, size_t end) {
    for (size_t n = begin; n < end; ++n)
      samples[n] = sample_frame(scene, frames[n], spec, d_max, pixel_stride);
  });
  return samples;
}

}  // namespace aerovox
