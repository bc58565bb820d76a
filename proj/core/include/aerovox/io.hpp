#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/grid.hpp"
#include "aerovox/gt_sampling.hpp"
#include "aerovox/image.hpp"
#include "aerovox/point_cloud.hpp"
#include "aerovox/taxonomy.hpp"

namespace aerovox {

// File/format-level failures (missing file, bad magic, short read, parse
// error). The CLI maps these to its I/O exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- Point clouds: PLY, ascii or binary little-endian ---------------------
// Vertex properties: x/y/z (float32 or float64) and an optional uint16
// 'class'; clouds without it read with all labels 0.
SemanticPointCloud read_point_cloud(const std::string& path);
void write_point_cloud(const std::string& path, const SemanticPointCloud& cloud,
                       bool binary = true);

// --- Cameras: one frame per text line --------------------------------------
// id fx fy cx cy width height r00..r22 (row-major, world-to-camera) tx ty tz
// '#' starts a comment. Doubles round-trip exactly.
std::vector<CameraFrame> read_cameras(const std::string& path);
void write_cameras(const std::string& path, const std::vector<CameraFrame>& frames);

// --- Raw images: 8-byte header (uint32 LE width, height), row-major --------
DepthMap read_depth_raw(const std::string& path);              // float32 LE
void write_depth_raw(const std::string& path, const DepthMap& depth);
Image<std::uint8_t> read_mask_raw(const std::string& path);    // uint8
void write_mask_raw(const std::string& path, const Image<std::uint8_t>& mask);

// --- PNG variants (png_io.cpp) ---------------------------------------------
// Depth as single-channel 16-bit PNG in millimeters; masks as 8-bit gray.
DepthMap read_depth_png(const std::string& path);
void write_depth_png(const std::string& path, const DepthMap& depth);
void write_mask_png(const std::string& path, const Image<std::uint8_t>& mask);

// --- Dense semantic volume --------------------------------------------------
// "AVOXVOL1" magic, uint32 LE dims (X,Y,Z), float64 LE voxel size and origin,
// then X*Y*Z uint16 LE labels in linear order.
SceneGrid read_volume(const std::string& path);
void write_volume(const std::string& path, const SceneGrid& grid);

// --- Taxonomy table ----------------------------------------------------------
// One class per line: id name group(instance|ground|others) frequency
// dbscan_eps dbscan_min_pts (0 0 when not an instance class).
Taxonomy read_taxonomy(const std::string& path);
void write_taxonomy(const std::string& path, const Taxonomy& taxonomy);

// --- Frame id lists ----------------------------------------------------------
std::vector<int> read_id_list(const std::string& path);
void write_id_list(const std::string& path, const std::vector<int>& ids,
                   const std::string& header_comment = "");

// --- Per-frame ground-truth samples ------------------------------------------
// dir/NNNNNN.label: uint16 LE per voxel, linear order. dir/NNNNNN.invalid,
// .occluded, .surface: bit-packed, 8 voxels/byte, MSB first, same order.
// dir/NNNNNN.depth: raw depth image (optional).
struct SampleRecord {
  int frame_id = -1;
  LabelVolume labels;
  MaskVolume masks;
  DepthMap depth;  // empty when absent
};

std::string sample_basename(int frame_id);
void write_sample(const SampleRecord& record, const std::string& dir);
// Reads back a sample; `dims` must match what the files contain.
SampleRecord read_sample(const std::string& dir, int frame_id, const Vec3i& dims,
                         bool with_depth = true);

}  // namespace aerovox
