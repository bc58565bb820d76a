#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "aerovox/io.hpp"
#include "aerovox/pipeline.hpp"

using namespace aerovox;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() /
           (std::string("aerovox_pipe_") + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("the stage runners drive a scene directory end to end") {
  TempDir tmp("e2e");
  const std::string dir = tmp.str();

  run_synth(dir, "desk", 7);
  REQUIRE(fs::exists(tmp.path / "config.txt"));
  REQUIRE(fs::exists(tmp.path / "taxonomy.txt"));
  REQUIRE(fs::exists(tmp.path / "cameras.txt"));
  REQUIRE(fs::exists(tmp.path / "points.ply"));
  REQUIRE(fs::exists(tmp.path / "points_gt.ply"));
  CHECK(!fs::exists(tmp.path / ".aerovox.lock"));  // released after the stage

  const std::vector<CameraFrame> frames = read_cameras((tmp.path / "cameras.txt").string());
  REQUIRE(!frames.empty());
  for (const CameraFrame& f : frames) {
    CHECK(fs::exists(tmp.path / "depth" / (sample_basename(f.id) + ".bin")));
    CHECK(fs::exists(tmp.path / "masks" / (sample_basename(f.id) + ".raw")));
  }

  // The public cloud ships unlabeled; the reference labels live separately.
  const SemanticPointCloud pub = read_point_cloud((tmp.path / "points.ply").string());
  const SemanticPointCloud ref = read_point_cloud((tmp.path / "points_gt.ply").string());
  REQUIRE(pub.size() == ref.size());
  CHECK(std::all_of(pub.labels.begin(), pub.labels.end(),
                    [](std::uint16_t c) { return c == 0; }));
  CHECK(std::any_of(ref.labels.begin(), ref.labels.end(),
                    [](std::uint16_t c) { return c != 0; }));

  // Stage ordering is enforced through the files each stage needs.
  CHECK_THROWS_AS(run_lift_labels(dir), IoError);  // no selected.txt yet

  const SelectionResult sel = run_select_frames(dir);
  REQUIRE(!sel.selected.empty());
  CHECK(sel.selected.size() <= frames.size());
  CHECK(sel.coverage > 0.0);
  CHECK(sel.coverage <= 1.0);
  std::set<int> known;
  for (const CameraFrame& f : frames) known.insert(f.id);
  for (int id : sel.selected) CHECK(known.count(id) == 1);
  CHECK(std::is_sorted(sel.selected.begin(), sel.selected.end()));
  CHECK(read_id_list((tmp.path / "selected.txt").string()) == sel.selected);
  {
    std::ifstream in((tmp.path / "selected.txt").string());
    std::string first_line;
    std::getline(in, first_line);
    CHECK(first_line.find("coverage") != std::string::npos);
  }

  // Selection is restartable: a second run finds the same frames.
  const SelectionResult again = run_select_frames(dir);
  CHECK(again.selected == sel.selected);
  CHECK(again.coverage == sel.coverage);

  run_lift_labels(dir);
  const SemanticPointCloud labeled =
      read_point_cloud((tmp.path / "labeled_points.ply").string());
  REQUIRE(labeled.size() == pub.size());
  CHECK(std::all_of(labeled.labels.begin(), labeled.labels.end(),
                    [](std::uint16_t c) { return c >= 1 && c <= 22; }));
  // Lifting should recover the reference labels for the vast majority of
  // points (ideal depth and masks; errors concentrate at class borders).
  size_t agree = 0;
  for (size_t i = 0; i < ref.size(); ++i) agree += labeled.labels[i] == ref.labels[i];
  CHECK(static_cast<double>(agree) / ref.size() > 0.9);

  const DensifyStats stats = run_densify(dir);
  CHECK(stats.clusters > 0);
  CHECK(stats.inst_voxels > 0);
  CHECK(stats.gnd_voxels > 0);
  CHECK(stats.oth_voxels > 0);
  const SceneGrid grid = read_volume((tmp.path / "scene_grid.vox").string());
  // Group volumes may overlap before precedence aggregation, so the merged
  // count is bounded by them, not equal to their sum.
  const std::int64_t occupied = grid.labels.count_nonzero();
  CHECK(occupied <= stats.inst_voxels + stats.gnd_voxels + stats.oth_voxels);
  CHECK(occupied >= std::max({stats.inst_voxels, stats.gnd_voxels, stats.oth_voxels}));
  // The grid must cover the cloud with the configured padding.
  const PipelineConfig cfg = read_config((tmp.path / "config.txt").string());
  for (const Vec3& p : labeled.positions) CHECK(voxel_index(p, grid.spec).has_value());
  CHECK(cfg.frame_grid_dims == Vec3i(96, 64, 64));  // desk preset override

  const std::string csv = run_stats(dir);
  std::istringstream rows(csv);
  std::string header;
  std::getline(rows, header);
  CHECK(header == "class_id,name,voxels,share_pct");
  size_t lines = 0;
  for (std::string row; std::getline(rows, row);) ++lines;
  CHECK(lines == 22);
  CHECK(csv.find("building") != std::string::npos);

  run_sample_gt(dir);
  for (const CameraFrame& f : frames) {
    CHECK(fs::exists(tmp.path / "samples" / (sample_basename(f.id) + ".label")));
    CHECK(fs::exists(tmp.path / "samples" / (sample_basename(f.id) + ".invalid")));
    CHECK(fs::exists(tmp.path / "samples" / (sample_basename(f.id) + ".occluded")));
    CHECK(fs::exists(tmp.path / "samples" / (sample_basename(f.id) + ".surface")));
  }

  const ValidationReport report = run_validate(dir);
  CHECK(report.samples_checked == frames.size());
  for (const std::string& v : report.violations) MESSAGE(v);
  CHECK(report.ok());

  // A spot sample reads back with the configured dims and plausible content.
  const SampleRecord rec = read_sample((tmp.path / "samples").string(), frames[0].id,
                                       cfg.frame_grid_dims);
  CHECK(rec.labels.count_nonzero() > 0);
  CHECK(rec.depth.width == frames[0].intrinsics.width);
}

TEST_CASE("a stale lock file blocks every stage runner") {
  TempDir tmp("lock");
  const std::string dir = tmp.str();
  std::ofstream((tmp.path / ".aerovox.lock").string()) << "";
  CHECK_THROWS_AS(run_synth(dir, "desk", 7), IoError);
  fs::remove(tmp.path / ".aerovox.lock");
  CHECK_NOTHROW(run_synth(dir, "desk", 7));
  CHECK(!fs::exists(tmp.path / ".aerovox.lock"));
}

TEST_CASE("unknown presets and missing scene files are reported") {
  TempDir tmp("err");
  CHECK_THROWS_AS(run_synth(tmp.str(), "warehouse", 1), ConfigError);
  CHECK_THROWS_AS(run_select_frames(tmp.str()), IoError);  // no config.txt
  CHECK_THROWS_AS(run_stats(tmp.str()), IoError);
}
