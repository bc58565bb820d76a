#include "aerovox/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "aerovox/io.hpp"
#include "aerovox/label_lifting.hpp"
#include "aerovox/synth.hpp"

namespace aerovox {

namespace fs = std::filesystem;

namespace {

void log_to(const RunOptions& opts, const std::string& msg) {
  if (opts.log) opts.log(msg);
}

// One process owns a scene directory while a stage runs.
class DirLock {
 public:
  explicit DirLock(const std::string& dir) : path_(fs::path(dir) / ".aerovox.lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw IoError("scene directory is locked (remove " + path_.string() +
                    " if no other process is running)");
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

std::string scene_file(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

struct SceneInputs {
  PipelineConfig cfg;
  std::vector<CameraFrame> frames;
};

SceneInputs load_scene_inputs(const std::string& dir) {
  SceneInputs in;
  in.cfg = read_config(scene_file(dir, "config.txt"));
  in.frames = read_cameras(scene_file(dir, "cameras.txt"));
  if (in.frames.empty()) throw IoError("no camera frames in " + dir);
  return in;
}

const CameraFrame& frame_by_id(const std::vector<CameraFrame>& frames, int id) {
  for (const CameraFrame& f : frames)
    if (f.id == id) return f;
  throw IoError("frame id " + std::to_string(id) + " not present in cameras.txt");
}

int effective_threads(const PipelineConfig& cfg, const RunOptions& opts) {
  return opts.threads >= 0 ? opts.threads : cfg.threads;
}

std::string depth_path(const std::string& dir, int id) {
  return (fs::path(dir) / "depth" / (sample_basename(id) + ".bin")).string();
}

std::string mask_path(const std::string& dir, int id) {
  return (fs::path(dir) / "masks" / (sample_basename(id) + ".raw")).string();
}

}  // namespace

void run_synth(const std::string& scene_dir, const std::string& preset, std::uint64_t seed,
               const RunOptions& opts) {
  SynthSceneSpec spec;
  PipelineConfig cfg;  // defaults, adjusted per preset below
  if (preset == "desk") {
    spec = desk_scene_spec(seed);
    cfg.frame_grid_dims = Vec3i(96, 64, 64);
  } else if (preset == "coverage") {
    spec = coverage_scene_spec(seed);
  } else {
    throw ConfigError("unknown synth preset '" + preset + "' (desk, coverage)");
  }
  cfg.taxonomy_path = "taxonomy.txt";

  fs::create_directories(scene_dir);
  DirLock lock(scene_dir);
  fs::create_directories(fs::path(scene_dir) / "depth");
  fs::create_directories(fs::path(scene_dir) / "masks");

  log_to(opts, "generating synthetic scene (preset " + preset + ")");
  const SynthScene scene = generate_scene(spec);
  log_to(opts, "scene: " + std::to_string(scene.cloud.size()) + " points, " +
                   std::to_string(scene.frames.size()) + " frames");

  write_config(scene_file(scene_dir, "config.txt"), cfg);
  write_taxonomy(scene_file(scene_dir, "taxonomy.txt"), Taxonomy::aerial_default());
  write_cameras(scene_file(scene_dir, "cameras.txt"), scene.frames);
  write_point_cloud(scene_file(scene_dir, "points_gt.ply"), scene.cloud);

  SemanticPointCloud unlabeled = scene.cloud;
  std::fill(unlabeled.labels.begin(), unlabeled.labels.end(), 0);
  write_point_cloud(scene_file(scene_dir, "points.ply"), unlabeled);

  for (size_t n = 0; n < scene.frames.size(); ++n) {
    const int id = scene.frames[n].id;
    write_depth_raw(depth_path(scene_dir, id), scene.depths[n]);
    write_mask_raw(mask_path(scene_dir, id), scene.masks[n].classes);
    if (opts.debug_artifacts) {
      write_depth_png((fs::path(scene_dir) / "depth" / (sample_basename(id) + ".png")).string(),
                      scene.depths[n]);
      write_mask_png((fs::path(scene_dir) / "masks" / (sample_basename(id) + ".png")).string(),
                     scene.masks[n].classes);
    }
  }
}

SelectionResult run_select_frames(const std::string& scene_dir, const RunOptions& opts) {
  const SceneInputs in = load_scene_inputs(scene_dir);
  DirLock lock(scene_dir);

  SelectionResult result;
  result.selected = stratified_select(in.frames, in.cfg.cell_size_m);
  log_to(opts, "selected " + std::to_string(result.selected.size()) + " of " +
                   std::to_string(in.frames.size()) + " frames");

  const SemanticPointCloud cloud = read_point_cloud(scene_file(scene_dir, "points.ply"));
  DepthTolerance tol{in.cfg.depth_tol_rel, in.cfg.depth_tol_floor_m};
  std::vector<CorrespondenceSet> sets;
  sets.reserve(result.selected.size());
  for (int id : result.selected) {
    const DepthMap depth = read_depth_raw(depth_path(scene_dir, id));
    sets.push_back(compute_correspondences(cloud.positions, frame_by_id(in.frames, id), depth, tol));
  }
  result.coverage = coverage(sets, result.selected, cloud.size());
  log_to(opts, "coverage of selection: " + std::to_string(result.coverage));

  std::ostringstream header;
  header << "coverage " << std::setprecision(17) << result.coverage;
  write_id_list(scene_file(scene_dir, "selected.txt"), result.selected, header.str());
  return result;
}

void run_lift_labels(const std::string& scene_dir, const RunOptions& opts) {
  const SceneInputs in = load_scene_inputs(scene_dir);
  DirLock lock(scene_dir);
  const Taxonomy taxonomy = load_taxonomy(in.cfg, scene_dir);
  const int threads = effective_threads(in.cfg, opts);

  const SemanticPointCloud cloud = read_point_cloud(scene_file(scene_dir, "points.ply"));
  const std::vector<int> selected = read_id_list(scene_file(scene_dir, "selected.txt"));
  if (selected.empty()) throw IoError("selected.txt is empty; run select-frames first");

  DepthTolerance tol{in.cfg.depth_tol_rel, in.cfg.depth_tol_floor_m};
  std::vector<SemanticMask> masks;
  std::vector<CorrespondenceSet> sets;
  for (int id : selected) {
    const CameraFrame& frame = frame_by_id(in.frames, id);
    const DepthMap depth = read_depth_raw(depth_path(scene_dir, id));
    SemanticMask mask;
    mask.frame_id = id;
    mask.classes = read_mask_raw(mask_path(scene_dir, id));
    if (mask.classes.width != frame.intrinsics.width ||
        mask.classes.height != frame.intrinsics.height)
      throw IoError("mask dims disagree with intrinsics for frame " + std::to_string(id));
    masks.push_back(std::move(mask));
    sets.push_back(compute_correspondences(cloud.positions, frame, depth, tol));
  }

  const VoteTable votes = accumulate_votes(masks, sets, cloud.size());
  std::vector<std::uint16_t> lifted = majority_vote(votes, taxonomy);

  SemanticPointCloud seen;
  std::vector<Vec3> unseen;
  std::vector<size_t> unseen_idx;
  for (size_t i = 0; i < cloud.size(); ++i) {
    if (lifted[i] != 0)
      seen.push_back(cloud.positions[i], lifted[i]);
    else {
      unseen.push_back(cloud.positions[i]);
      unseen_idx.push_back(i);
    }
  }
  log_to(opts, std::to_string(seen.size()) + " points labeled from masks, " +
                   std::to_string(unseen.size()) + " assigned by nearest neighbors");

  if (!unseen.empty()) {
    const auto assigned = knn_assign(seen, unseen, in.cfg.knn_assign_k, in.cfg.knn_epsilon_d,
                                     taxonomy, threads);
    for (size_t q = 0; q < unseen.size(); ++q) lifted[unseen_idx[q]] = assigned[q];
  }

  SemanticPointCloud labeled;
  labeled.positions = cloud.positions;
  labeled.labels = std::move(lifted);
  const SemanticPointCloud refined =
      knn_refine(labeled, in.cfg.knn_refine_k, in.cfg.knn_epsilon_d, taxonomy, threads);
  write_point_cloud(scene_file(scene_dir, "labeled_points.ply"), refined);
}

DensifyStats run_densify(const std::string& scene_dir, const RunOptions& opts) {
  const SceneInputs in = load_scene_inputs(scene_dir);
  DirLock lock(scene_dir);
  const Taxonomy taxonomy = load_taxonomy(in.cfg, scene_dir);

  const SemanticPointCloud cloud =
      read_point_cloud(scene_file(scene_dir, "labeled_points.ply"));
  if (cloud.size() == 0) throw IoError("labeled_points.ply is empty");

  // Scene grid: labeled-cloud bounds, padded, snapped to voxel multiples so
  // the grid does not depend on floating-point bbox noise.
  Vec3 bb_min = cloud.positions[0], bb_max = cloud.positions[0];
  for (const Vec3& p : cloud.positions) {
    bb_min = bb_min.cwiseMin(p);
    bb_max = bb_max.cwiseMax(p);
  }
  const double r = in.cfg.voxel_size_m;
  GridSpec grid;
  grid.r = r;
  for (int a = 0; a < 3; ++a) {
    const auto lo = static_cast<std::int64_t>(std::floor(bb_min[a] / r)) -
                    in.cfg.scene_grid_pad_vox;
    const auto hi = static_cast<std::int64_t>(std::floor(bb_max[a] / r)) +
                    in.cfg.scene_grid_pad_vox;
    grid.origin[a] = static_cast<double>(lo) * r;
    grid.dims[a] = static_cast<int>(hi - lo + 1);
  }
  if (grid.voxel_count() > (std::int64_t(1) << 31))
    throw ConfigError("scene grid would exceed 2^31 voxels; raise voxel_size_m");
  log_to(opts, "scene grid " + std::to_string(grid.dims.x()) + "x" +
                   std::to_string(grid.dims.y()) + "x" + std::to_string(grid.dims.z()));

  DensifyParams params;
  params.virtual_views = in.cfg.virtual_views;
  params.silhouette_raster_px = in.cfg.silhouette_raster_px;
  params.alpha = in.cfg.alpha;
  params.carve_margin_vox = in.cfg.carve_margin_vox;
  params.threads = effective_threads(in.cfg, opts);

  DensifyStats stats;
  const SceneGrid scene = densify_cloud(cloud, taxonomy, grid, params, &stats, opts.log);
  log_to(opts, "occupied voxels: instance " + std::to_string(stats.inst_voxels) + ", ground " +
                   std::to_string(stats.gnd_voxels) + ", other " +
                   std::to_string(stats.oth_voxels));
  write_volume(scene_file(scene_dir, "scene_grid.vox"), scene);
  return stats;
}

void run_sample_gt(const std::string& scene_dir, const RunOptions& opts) {
  const SceneInputs in = load_scene_inputs(scene_dir);
  DirLock lock(scene_dir);
  const SceneGrid scene = read_volume(scene_file(scene_dir, "scene_grid.vox"));
  const FrameGridSpec spec = in.cfg.frame_grid();
  spec.validate();
  const double d_max = in.cfg.d_max_effective();

  const fs::path samples = fs::path(scene_dir) / "samples";
  fs::create_directories(samples);
  for (const CameraFrame& frame : in.frames) {
    const FrameSample s =
        sample_frame(scene, frame, spec, d_max, in.cfg.pixel_stride);
    SampleRecord record;
    record.frame_id = frame.id;
    record.labels = s.grid.labels;
    record.masks = s.masks;
    record.depth = s.depth;
    write_sample(record, samples.string());
    if (opts.debug_artifacts)
      write_depth_png((samples / (sample_basename(frame.id) + ".png")).string(), s.depth);
  }
  log_to(opts, "wrote " + std::to_string(in.frames.size()) + " samples");
}

ValidationReport run_validate(const std::string& scene_dir, const RunOptions& opts) {
  const ValidationReport report = validate_scene_dir(scene_dir);
  log_to(opts, std::to_string(report.samples_checked) + " samples checked, " +
                   std::to_string(report.violations.size()) + " violations");
  return report;
}

std::string run_stats(const std::string& scene_dir) {
  const PipelineConfig cfg = read_config(scene_file(scene_dir, "config.txt"));
  const Taxonomy taxonomy = load_taxonomy(cfg, scene_dir);
  const SceneGrid scene = read_volume(scene_file(scene_dir, "scene_grid.vox"));

  std::vector<std::int64_t> counts(taxonomy.size() + 1, 0);
  for (std::uint16_t cls : scene.labels.labels)
    if (cls < counts.size()) ++counts[cls];
  const std::int64_t occupied = scene.labels.count_nonzero();

  std::ostringstream csv;
  csv << "class_id,name,voxels,share_pct\n" << std::setprecision(6);
  for (std::uint16_t id = 1; id <= taxonomy.size(); ++id) {
    const double pct = occupied > 0 ? 100.0 * counts[id] / occupied : 0.0;
    csv << id << "," << taxonomy.name(id) << "," << counts[id] << "," << pct << "\n";
  }
  return csv.str();
}

}  // namespace aerovox
