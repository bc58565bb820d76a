#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

// All dense volumes flatten indices as linear = (i*Y + j)*Z + k for
// dims (X,Y,Z): i is the slowest axis, k the fastest. Files on disk use the
// same order.
inline std::int64_t linear_index(const Vec3i& dims, int i, int j, int k) {
  return (static_cast<std::int64_t>(i) * dims.y() + j) * dims.z() + k;
}

// Dense per-voxel class ids; 0 = empty/unlabeled.
struct LabelVolume {
  Vec3i dims{0, 0, 0};
  std::vector<std::uint16_t> labels;

  LabelVolume() = default;
  explicit LabelVolume(const Vec3i& d)
      : dims(d), labels(static_cast<size_t>(d.x()) * d.y() * d.z(), 0) {
    if (d.minCoeff() <= 0) throw std::invalid_argument("LabelVolume: dims must be positive");
  }

  std::uint16_t& at(int i, int j, int k) { return labels[linear_index(dims, i, j, k)]; }
  std::uint16_t at(int i, int j, int k) const { return labels[linear_index(dims, i, j, k)]; }
  std::int64_t count_nonzero() const {
    std::int64_t n = 0;
    for (auto v : labels) n += v != 0;
    return n;
  }
};

// One bit per voxel, packed 8 voxels per byte, MSB first within a byte, in
// linear index order. The in-memory layout matches the on-disk mask format.
struct BitVolume {
  Vec3i dims{0, 0, 0};
  std::vector<std::uint8_t> bytes;

  BitVolume() = default;
  explicit BitVolume(const Vec3i& d)
      : dims(d), bytes((static_cast<size_t>(d.x()) * d.y() * d.z() + 7) / 8, 0) {
    if (d.minCoeff() <= 0) throw std::invalid_argument("BitVolume: dims must be positive");
  }

  bool get(int i, int j, int k) const {
    const std::int64_t n = linear_index(dims, i, j, k);
    return (bytes[n >> 3] >> (7 - (n & 7))) & 1;
  }
  void set(int i, int j, int k, bool value) {
    const std::int64_t n = linear_index(dims, i, j, k);
    const std::uint8_t bit = std::uint8_t(1) << (7 - (n & 7));
    if (value)
      bytes[n >> 3] |= bit;
    else
      bytes[n >> 3] &= static_cast<std::uint8_t>(~bit);
  }
  std::int64_t count() const {
    std::int64_t n = 0;
    for (std::uint8_t b : bytes) n += std::popcount(static_cast<unsigned>(b));
    return n;
  }
};

// Sparse set of occupied voxels with one class per voxel. Keys are linear
// indices into `dims`, kept ordered so iteration is deterministic.
struct OccupiedSet {
  Vec3i dims{0, 0, 0};
  std::map<std::int64_t, std::uint16_t> voxels;

  OccupiedSet() = default;
  explicit OccupiedSet(const Vec3i& d) : dims(d) {}

  std::int64_t key(const VoxelIndex& v) const { return linear_index(dims, v.i, v.j, v.k); }
  VoxelIndex unkey(std::int64_t n) const {
    const int k = static_cast<int>(n % dims.z());
    n /= dims.z();
    const int j = static_cast<int>(n % dims.y());
    const int i = static_cast<int>(n / dims.y());
    return {i, j, k};
  }

  void insert(const VoxelIndex& v, std::uint16_t cls) { voxels[key(v)] = cls; }
  bool contains(const VoxelIndex& v) const { return voxels.count(key(v)) != 0; }
  size_t size() const { return voxels.size(); }
};

// Scene-level semantic grid: the output of densification.
struct SceneGrid {
  GridSpec spec;
  LabelVolume labels;

  SceneGrid() = default;
  explicit SceneGrid(const GridSpec& s) : spec(s), labels(s.dims) { spec.validate(); }

  // Class at a world point, 0 when empty or outside the grid.
  std::uint16_t label_at(const Vec3& p_world) const {
    const auto v = voxel_index(p_world, spec);
    if (!v) return 0;
    return labels.at(v->i, v->j, v->k);
  }
};

}  // namespace aerovox
