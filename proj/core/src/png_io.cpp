#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

#include "aerovox/io.hpp"

namespace aerovox {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void quiet_warn(png_structp, png_const_charp) {}

}  // namespace

// Depth stored as 16-bit grayscale millimeters (big-endian per PNG);
// 0 = no depth. Values beyond 65.535 m saturate.
void write_depth_png(const std::string& path, const DepthMap& depth) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warn);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);

  std::vector<png_byte> row(static_cast<size_t>(depth.width) * 2);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write failed: " + path);
  }

  png_init_io(png, f.get());
  png_set_IHDR(png, info, depth.width, depth.height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const double mm = std::round(static_cast<double>(depth(x, y)) * 1000.0);
      const auto q = static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
      row[2 * x] = static_cast<png_byte>(q >> 8);
      row[2 * x + 1] = static_cast<png_byte>(q & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

DepthMap read_depth_png(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open for reading: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warn);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);

  DepthMap depth;
  std::vector<png_byte> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("png read failed: " + path);
  }

  png_init_io(png, f.get());
  png_read_info(png, info);
  const bool ok_format = png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
                         png_get_bit_depth(png, info) == 16;
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  if (!ok_format) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("depth PNG must be 16-bit grayscale: " + path);
  }

  depth = DepthMap(w, h, 0.0f);
  row.resize(static_cast<size_t>(w) * 2);
  for (int y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < w; ++x) {
      const auto q = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
      depth(x, y) = static_cast<float>(q) / 1000.0f;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return depth;
}

void write_mask_png(const std::string& path, const Image<std::uint8_t>& mask) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warn);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write failed: " + path);
  }

  png_init_io(png, f.get());
  png_set_IHDR(png, info, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < mask.height; ++y) png_write_row(png, &mask(0, y));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace aerovox
