#pragma once

#include <cstdint>
#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

// Point cloud with one class id per point; 0 = unlabeled.
struct SemanticPointCloud {
  std::vector<Vec3> positions;
  std::vector<std::uint16_t> labels;

  size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void reserve(size_t n) {
    positions.reserve(n);
    labels.reserve(n);
  }
  void push_back(const Vec3& p, std::uint16_t cls) {
    positions.push_back(p);
    labels.push_back(cls);
  }

  void check_consistent() const {
    if (positions.size() != labels.size())
      throw std::invalid_argument("SemanticPointCloud: positions/labels size mismatch");
  }
};

}  // namespace aerovox
