#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "aerovox/types.hpp"

namespace aerovox {

// Triangle mesh with a semantic class per vertex.
struct ClassedMesh {
  std::vector<Vec3> vertices;
  std::vector<std::uint16_t> classes;  // parallel to vertices
  std::vector<std::array<std::uint32_t, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

}  // namespace aerovox
