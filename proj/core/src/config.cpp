#include "aerovox/config.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "aerovox/io.hpp"

namespace aerovox {

void PipelineConfig::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config: ") + what);
  };
  need(voxel_size_m > 0.0, "voxel_size_m must be positive");
  need(frame_grid_dims.minCoeff() > 0, "frame_grid_dims must be positive");
  need(frame_d_min_m >= 0.0, "frame_d_min_m must be >= 0");
  need(frame_d_max_m == 0.0 || frame_d_max_m > frame_d_min_m,
       "frame_d_max_m must be 0 or > frame_d_min_m");
  need(cell_size_m > 0.0, "cell_size_m must be positive");
  need(knn_assign_k >= 1, "knn_assign_k must be >= 1");
  need(knn_refine_k >= 1, "knn_refine_k must be >= 1");
  need(knn_epsilon_d > 0.0, "knn_epsilon_d must be positive");
  need(alpha > 0.0, "alpha must be positive");
  need(virtual_views >= 2, "virtual_views must be >= 2");
  need(silhouette_raster_px >= 8, "silhouette_raster_px must be >= 8");
  need(carve_margin_vox >= 0, "carve_margin_vox must be >= 0");
  need(scene_grid_pad_vox >= 0, "scene_grid_pad_vox must be >= 0");
  need(depth_tol_rel >= 0.0, "depth_tol_rel must be >= 0");
  need(depth_tol_floor_m > 0.0, "depth_tol_floor_m must be positive");
  need(pixel_stride >= 1, "pixel_stride must be >= 1");
  need(threads >= 0, "threads must be >= 0");
}

PipelineConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);

  PipelineConfig cfg;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const size_t eq = line.find('=');
    std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t\r\n") + 1);
    if (key.empty()) continue;
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + " lacks '=': " + path);
    std::istringstream val(line.substr(eq + 1));

    const auto parse = [&](auto& field) {
      if (!(val >> field))
        throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
    };
    if (key == "voxel_size_m")
      parse(cfg.voxel_size_m);
    else if (key == "frame_grid_dims") {
      parse(cfg.frame_grid_dims.x());
      parse(cfg.frame_grid_dims.y());
      parse(cfg.frame_grid_dims.z());
    } else if (key == "frame_d_min_m")
      parse(cfg.frame_d_min_m);
    else if (key == "frame_d_max_m")
      parse(cfg.frame_d_max_m);
    else if (key == "cell_size_m")
      parse(cfg.cell_size_m);
    else if (key == "knn_assign_k")
      parse(cfg.knn_assign_k);
    else if (key == "knn_refine_k")
      parse(cfg.knn_refine_k);
    else if (key == "knn_epsilon_d")
      parse(cfg.knn_epsilon_d);
    else if (key == "alpha")
      parse(cfg.alpha);
    else if (key == "virtual_views")
      parse(cfg.virtual_views);
    else if (key == "silhouette_raster_px")
      parse(cfg.silhouette_raster_px);
    else if (key == "carve_margin_vox")
      parse(cfg.carve_margin_vox);
    else if (key == "scene_grid_pad_vox")
      parse(cfg.scene_grid_pad_vox);
    else if (key == "depth_tol_rel")
      parse(cfg.depth_tol_rel);
    else if (key == "depth_tol_floor_m")
      parse(cfg.depth_tol_floor_m);
    else if (key == "pixel_stride")
      parse(cfg.pixel_stride);
    else if (key == "threads")
      parse(cfg.threads);
    else if (key == "taxonomy")
      parse(cfg.taxonomy_path);
    else
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                        "'");
  }
  cfg.validate();
  return cfg;
}

void write_config(const std::string& path, const PipelineConfig& cfg) {
  cfg.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write config: " + path);
  out << std::setprecision(17);
  out << "voxel_size_m = " << cfg.voxel_size_m << "\n";
  out << "frame_grid_dims = " << cfg.frame_grid_dims.x() << " " << cfg.frame_grid_dims.y()
      << " " << cfg.frame_grid_dims.z() << "\n";
  out << "frame_d_min_m = " << cfg.frame_d_min_m << "\n";
  out << "frame_d_max_m = " << cfg.frame_d_max_m << "\n";
  out << "cell_size_m = " << cfg.cell_size_m << "\n";
  out << "knn_assign_k = " << cfg.knn_assign_k << "\n";
  out << "knn_refine_k = " << cfg.knn_refine_k << "\n";
  out << "knn_epsilon_d = " << cfg.knn_epsilon_d << "\n";
  out << "alpha = " << cfg.alpha << "\n";
  out << "virtual_views = " << cfg.virtual_views << "\n";
  out << "silhouette_raster_px = " << cfg.silhouette_raster_px << "\n";
  out << "carve_margin_vox = " << cfg.carve_margin_vox << "\n";
  out << "scene_grid_pad_vox = " << cfg.scene_grid_pad_vox << "\n";
  out << "depth_tol_rel = " << cfg.depth_tol_rel << "\n";
  out << "depth_tol_floor_m = " << cfg.depth_tol_floor_m << "\n";
  out << "pixel_stride = " << cfg.pixel_stride << "\n";
  out << "threads = " << cfg.threads << "\n";
  if (!cfg.taxonomy_path.empty()) out << "taxonomy = " << cfg.taxonomy_path << "\n";
  out.flush();
  if (!out) throw IoError("config write failed: " + path);
}

Taxonomy load_taxonomy(const PipelineConfig& config, const std::string& base_dir) {
  if (config.taxonomy_path.empty()) return Taxonomy::aerial_default();
  std::filesystem::path p(config.taxonomy_path);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  return read_taxonomy(p.string());
}

}  // namespace aerovox
