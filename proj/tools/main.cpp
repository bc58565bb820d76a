#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "aerovox/pipeline.hpp"

namespace {

// Exit codes: 0 ok, 1 invariant violation, 2 I/O or format error, 3 config
// error.
constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kIo = 2;
constexpr int kConfig = 3;

aerovox::LogFn make_logger(bool verbose_flag) {
  const char* env = std::getenv("AEROVOX_LOG");
  const bool enabled = verbose_flag || (env != nullptr && std::string(env) != "" &&
                                        std::string(env) != "0");
  if (!enabled) return {};
  return [](const std::string& msg) { std::cerr << "[aerovox] " << msg << "\n"; };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point cloud to semantic-occupancy ground-truth pipeline"};
  app.require_subcommand(1);

  std::string scene_dir;
  std::string out_dir;
  std::string preset = "desk";
  std::uint64_t seed = 1;
  int threads = -1;
  bool debug_artifacts = false;
  bool verbose = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_scene) {
    if (needs_scene)
      cmd->add_option("--scene", scene_dir, "scene directory")->required();
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd->add_flag("--debug-artifacts", debug_artifacts, "write extra inspection files");
    cmd->add_flag("-v,--verbose", verbose, "log progress to stderr (or set AEROVOX_LOG)");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic scene directory");
  synth->add_option("--out", out_dir, "output scene directory")->required();
  synth->add_option("--preset", preset, "desk | coverage");
  synth->add_option("--seed", seed, "generator seed");
  add_common(synth, false);

  CLI::App* select = app.add_subcommand("select-frames", "stratified frame selection");
  add_common(select, true);
  CLI::App* lift = app.add_subcommand("lift-labels", "lift 2D masks into the point cloud");
  add_common(lift, true);
  CLI::App* densify = app.add_subcommand("densify", "build the scene voxel grid");
  add_common(densify, true);
  CLI::App* sample = app.add_subcommand("sample-gt", "extract per-frame ground truth");
  add_common(sample, true);
  CLI::App* validate = app.add_subcommand("validate", "check sample invariants");
  add_common(validate, true);
  CLI::App* stats = app.add_subcommand("stats", "per-class voxel shares as CSV");
  add_common(stats, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  aerovox::RunOptions opts;
  opts.threads = threads;
  opts.debug_artifacts = debug_artifacts;
  opts.log = make_logger(verbose);

  try {
    if (app.got_subcommand(synth)) {
      aerovox::run_synth(out_dir, preset, seed, opts);
    } else if (app.got_subcommand(select)) {
      const auto result = aerovox::run_select_frames(scene_dir, opts);
      std::cout << "selected " << result.selected.size() << " frames, coverage "
                << result.coverage << "\n";
    } else if (app.got_subcommand(lift)) {
      aerovox::run_lift_labels(scene_dir, opts);
    } else if (app.got_subcommand(densify)) {
      aerovox::run_densify(scene_dir, opts);
    } else if (app.got_subcommand(sample)) {
      aerovox::run_sample_gt(scene_dir, opts);
    } else if (app.got_subcommand(validate)) {
      const auto report = aerovox::run_validate(scene_dir, opts);
      for (const std::string& v : report.violations) std::cerr << "violation: " << v << "\n";
      std::cout << report.samples_checked << " samples checked, "
                << report.violations.size() << " violations\n";
      if (!report.ok()) return kInvariant;
    } else if (app.got_subcommand(stats)) {
      std::cout << aerovox::run_stats(scene_dir);
    }
  } catch (const aerovox::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const aerovox::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
