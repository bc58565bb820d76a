#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

// Exact k-nearest-neighbor index over 3D points. Results are ordered by
// (squared distance, point index) lexicographically, which makes neighbor
// sets and downstream weighted votes independent of traversal order; a
// brute-force scan sorted the same way returns the identical list.
class KdTree {
 public:
  struct Neighbor {
    double d2 = 0.0;
    std::uint32_t index = 0;

    bool operator<(const Neighbor& o) const {
      if (d2 != o.d2) return d2 < o.d2;
      return index < o.index;
    }
  };

  KdTree() = default;
  explicit KdTree(const std::vector<Vec3>& points);

  size_t size() const { return points_.size(); }

  // Up to k nearest points to `query`, ascending (d2, index). `skip` is an
  // optional point index to exclude (used when querying a point against its
  // own cloud); pass kNoSkip to keep everything.
  static constexpr std::uint32_t kNoSkip = 0xffffffffu;
  std::vector<Neighbor> knn(const Vec3& query, int k,
                            std::uint32_t skip = kNoSkip) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    std::uint32_t begin = 0;  // leaf range into order_
    std::uint32_t end = 0;
    double split = 0.0;
    int axis = -1;  // -1 marks a leaf
  };

  int build(std::uint32_t begin, std::uint32_t end);

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace aerovox
