#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "aerovox/config.hpp"
#include "aerovox/densify.hpp"
#include "aerovox/frame_selection.hpp"
#include "aerovox/validate.hpp"

namespace aerovox {

using LogFn = std::function<void(const std::string&)>;

// Stage runners operating on a scene directory:
//   config.txt, taxonomy.txt, cameras.txt          scene definition
//   points.ply                                     reconstructed cloud (input)
//   points_gt.ply                                  synthetic reference labels
//   depth/NNNNNN.bin, masks/NNNNNN.raw             per-frame depth + annotation
//   selected.txt                                   output of select-frames
//   labeled_points.ply                             output of lift-labels
//   scene_grid.vox                                 output of densify
//   samples/NNNNNN.{label,invalid,occluded,surface,depth}   output of sample-gt
// Each stage takes the directory exclusively via a .aerovox.lock file.

struct RunOptions {
  int threads = -1;  // -1 = use the config value
  bool debug_artifacts = false;
  LogFn log;
};

// Generates a synthetic scene ("desk" or "coverage" preset) into `scene_dir`.
void run_synth(const std::string& scene_dir, const std::string& preset, std::uint64_t seed,
               const RunOptions& opts = {});

// Stratified frame selection + coverage of the selection; writes selected.txt.
SelectionResult run_select_frames(const std::string& scene_dir, const RunOptions& opts = {});

// Lifts the selected frames' masks into the cloud (votes -> majority ->
// nearest-neighbor assignment of the remainder -> smoothing); writes
// labeled_points.ply.
void run_lift_labels(const std::string& scene_dir, const RunOptions& opts = {});

// Densifies the labeled cloud into the scene grid; writes scene_grid.vox.
DensifyStats run_densify(const std::string& scene_dir, const RunOptions& opts = {});

// Extracts per-frame ground-truth samples for every camera frame.
void run_sample_gt(const std::string& scene_dir, const RunOptions& opts = {});

// Invariant suite over the sample directory.
ValidationReport run_validate(const std::string& scene_dir, const RunOptions& opts = {});

// Per-class voxel counts of the scene grid as CSV text.
std::string run_stats(const std::string& scene_dir);

}  // namespace aerovox
