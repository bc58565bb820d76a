#pragma once

#include <stdexcept>
#include <string>

#include "aerovox/gt_sampling.hpp"
#include "aerovox/taxonomy.hpp"
#include "aerovox/types.hpp"

namespace aerovox {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All pipeline constants, read from a flat "key = value" text file. Defaults
// are the production values; units are part of the key names.
struct PipelineConfig {
  double voxel_size_m = 0.5;
  Vec3i frame_grid_dims{192, 128, 128};
  double frame_d_min_m = 0.5;
  double frame_d_max_m = 0.0;  // 0 = derive from the frame grid depth extent
  double cell_size_m = 25.0;
  int knn_assign_k = 100;
  int knn_refine_k = 200;
  double knn_epsilon_d = 1e-6;
  double alpha = 0.05;
  int virtual_views = 24;
  int silhouette_raster_px = 256;
  int carve_margin_vox = 2;
  int scene_grid_pad_vox = 2;
  double depth_tol_rel = 0.05;
  double depth_tol_floor_m = 0.5;
  int pixel_stride = 1;
  int threads = 1;
  std::string taxonomy_path;  // empty = built-in default taxonomy

  FrameGridSpec frame_grid() const {
    FrameGridSpec s;
    s.dims = frame_grid_dims;
    s.r = voxel_size_m;
    s.d_min = frame_d_min_m;
    return s;
  }
  double d_max_effective() const {
    return frame_d_max_m > 0.0 ? frame_d_max_m : frame_grid().d_max_default();
  }

  void validate() const;
};

PipelineConfig read_config(const std::string& path);
void write_config(const std::string& path, const PipelineConfig& config);

// The configured taxonomy; a relative taxonomy_path resolves against
// `base_dir`, an empty one yields the built-in default.
Taxonomy load_taxonomy(const PipelineConfig& config, const std::string& base_dir);

}  // namespace aerovox
