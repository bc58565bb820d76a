#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aerovox {

// Dense row-major 2D buffer addressed as (x, y) = (column, row).
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("Image: size must be positive");
  }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  T& operator()(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  const T& operator()(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }
  T& at(int x, int y) {
    if (!in_bounds(x, y)) throw std::out_of_range("Image::at");
    return (*this)(x, y);
  }
  const T& at(int x, int y) const {
    if (!in_bounds(x, y)) throw std::out_of_range("Image::at");
    return (*this)(x, y);
  }
};

using DepthMap = Image<float>;

// Per-pixel class ids for one annotated frame; 0 means unlabeled.
struct SemanticMask {
  int frame_id = -1;
  Image<std::uint8_t> classes;
};

}  // namespace aerovox
