#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace aerovox {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec3i = Eigen::Vector3i;

struct VoxelIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  bool operator==(const VoxelIndex&) const = default;
  bool operator<(const VoxelIndex& o) const {
    if (i != o.i) return i < o.i;
    if (j != o.j) return j < o.j;
    return k < o.k;
  }
};

// Eigen vectors compare coefficient-wise, so spell out what dims equality
// means once.
inline bool dims_equal(const Vec3i& a, const Vec3i& b) {
  return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

// Axis-aligned voxel grid in world coordinates. Voxels are half-open cubes:
// voxel (i,j,k) covers [origin + idx*r, origin + (idx+1)*r) per axis, so a
// point on a shared face belongs to exactly one voxel.
struct GridSpec {
  Vec3i dims{0, 0, 0};
  double r = 0.0;  // voxel edge length, meters
  Vec3 origin = Vec3::Zero();

  std::int64_t voxel_count() const {
    return static_cast<std::int64_t>(dims.x()) * dims.y() * dims.z();
  }
  Vec3 extent() const { return r * dims.cast<double>(); }
  Vec3 max_corner() const { return origin + extent(); }

  bool contains(const VoxelIndex& v) const {
    return v.i >= 0 && v.i < dims.x() && v.j >= 0 && v.j < dims.y() &&
           v.k >= 0 && v.k < dims.z();
  }

  void validate() const {
    if (dims.minCoeff() <= 0) throw std::invalid_argument("GridSpec: dims must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("GridSpec: voxel size must be positive");
  }
};

// Bins a world point into the grid; nullopt if it falls outside.
inline std::optional<VoxelIndex> voxel_index(const Vec3& p, const GridSpec& g) {
  const Vec3 q = (p - g.origin) / g.r;
  const VoxelIndex v{static_cast<int>(std::floor(q.x())),
                     static_cast<int>(std::floor(q.y())),
                     static_cast<int>(std::floor(q.z()))};
  if (!g.contains(v)) return std::nullopt;
  return v;
}

inline Vec3 voxel_center(const VoxelIndex& v, const GridSpec& g) {
  if (!g.contains(v)) throw std::out_of_range("voxel_center: index outside grid");
  return g.origin + g.r * Vec3(v.i + 0.5, v.j + 0.5, v.k + 0.5);
}

}  // namespace aerovox
