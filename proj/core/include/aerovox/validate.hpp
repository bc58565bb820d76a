#pragma once

#include <string>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/gt_sampling.hpp"
#include "aerovox/io.hpp"
#include "aerovox/taxonomy.hpp"

namespace aerovox {

struct ValidationReport {
  std::vector<std::string> violations;
  size_t samples_checked = 0;

  bool ok() const { return violations.empty(); }
  void fail(const std::string& what) { violations.push_back(what); }
};

// Checks one sample against its frame geometry:
//  - the invalid mask equals the recomputed frustum complement, bit for bit
//  - invalid voxels carry no label
//  - the surface mask equals the recomputed empty-6-neighbor rule
//  - the occluded mask equals the recomputed ray-traversal result; occluded
//    voxels are occupied and never any ray's first hit
//  - labels are valid taxonomy ids
void validate_sample(const SampleRecord& record, const CameraFrame& frame,
                     const FrameGridSpec& spec, double d_max, int pixel_stride,
                     const Taxonomy& taxonomy, ValidationReport& report);

// Runs validate_sample over every sample found in <scene_dir>/samples using
// the scene's config and cameras.
ValidationReport validate_scene_dir(const std::string& scene_dir);

}  // namespace aerovox
