#include "aerovox/validate.hpp"

#include <filesystem>

#include "aerovox/config.hpp"

namespace aerovox {

namespace {

std::string tag(int frame_id, const char* what) {
  return "frame " + std::to_string(frame_id) + ": " + what;
}

bool bits_equal(const BitVolume& a, const BitVolume& b) {
  return dims_equal(a.dims, b.dims) && a.bytes == b.bytes;
}

// a ∩ b nonempty?
bool bits_intersect(const BitVolume& a, const BitVolume& b) {
  for (size_t i = 0; i < a.bytes.size(); ++i)
    if (a.bytes[i] & b.bytes[i]) return true;
  return false;
}

}  // namespace

void validate_sample(const SampleRecord& record, const CameraFrame& frame,
                     const FrameGridSpec& spec, double d_max, int pixel_stride,
                     const Taxonomy& taxonomy, ValidationReport& report) {
  const int id = record.frame_id;
  if (!dims_equal(record.labels.dims, spec.dims)) {
    report.fail(tag(id, "label volume dims disagree with the configured frame grid"));
    return;
  }

  const BitVolume invalid_ref = invalid_mask(frame, spec, d_max);
  if (!bits_equal(record.masks.invalid, invalid_ref))
    report.fail(tag(id, "invalid mask is not the frustum complement"));

  FrameGrid grid;
  grid.spec = spec;
  grid.frame_id = id;
  grid.labels = record.labels;

  const BitVolume surface_ref = surface_mask(grid);
  if (!bits_equal(record.masks.surface, surface_ref))
    report.fail(tag(id, "surface mask disagrees with the empty-6-neighbor rule"));

  const RayTrace trace = trace_rays(grid, frame, pixel_stride);
  BitVolume occluded_ref(spec.dims);
  for (size_t i = 0; i < occluded_ref.bytes.size(); ++i)
    occluded_ref.bytes[i] = static_cast<std::uint8_t>(trace.behind_first.bytes[i] &
                                                      ~trace.first_hit_set.bytes[i]);
  if (!bits_equal(record.masks.occluded, occluded_ref))
    report.fail(tag(id, "occluded mask disagrees with ray traversal"));
  if (bits_intersect(record.masks.occluded, trace.first_hit_set))
    report.fail(tag(id, "a ray's first hit is marked occluded"));

  bool occluded_on_empty = false, surface_on_empty = false, label_on_invalid = false,
       bad_class = false;
  for (int i = 0; i < spec.dims.x(); ++i)
    for (int j = 0; j < spec.dims.y(); ++j)
      for (int k = 0; k < spec.dims.z(); ++k) {
        const std::uint16_t cls = record.labels.at(i, j, k);
        if (cls == 0) {
          occluded_on_empty |= record.masks.occluded.get(i, j, k);
          surface_on_empty |= record.masks.surface.get(i, j, k);
        } else {
          label_on_invalid |= record.masks.invalid.get(i, j, k);
          bad_class |= !taxonomy.valid_id(cls);
        }
      }
  if (occluded_on_empty) report.fail(tag(id, "occluded bit set on an empty voxel"));
  if (surface_on_empty) report.fail(tag(id, "surface bit set on an empty voxel"));
  if (label_on_invalid) report.fail(tag(id, "labeled voxel inside the invalid mask"));
  if (bad_class) report.fail(tag(id, "label is not a taxonomy class id"));

  report.samples_checked++;
}

ValidationReport validate_scene_dir(const std::string& scene_dir) {
  namespace fs = std::filesystem;
  ValidationReport report;

  const PipelineConfig cfg = read_config((fs::path(scene_dir) / "config.txt").string());
  const Taxonomy taxonomy = load_taxonomy(cfg, scene_dir);
  const auto frames = read_cameras((fs::path(scene_dir) / "cameras.txt").string());
  const FrameGridSpec spec = cfg.frame_grid();
  const double d_max = cfg.d_max_effective();

  const fs::path samples = fs::path(scene_dir) / "samples";
  if (!fs::is_directory(samples)) {
    report.fail("no samples directory: " + samples.string());
    return report;
  }
  for (const CameraFrame& frame : frames) {
    const fs::path label = samples / (sample_basename(frame.id) + ".label");
    if (!fs::exists(label)) continue;
    const SampleRecord record =
        read_sample(samples.string(), frame.id, spec.dims, /*with_depth=*/false);
    validate_sample(record, frame, spec, d_max, cfg.pixel_stride, taxonomy, report);
  }
  if (report.samples_checked == 0) report.fail("no samples found under " + samples.string());
  return report;
}

}  // namespace aerovox
