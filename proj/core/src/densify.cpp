#include "aerovox/densify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "aerovox/alpha_shape.hpp"
#include "aerovox/dbscan.hpp"
#include "aerovox/delaunay.hpp"
#include "aerovox/knn.hpp"
#include "aerovox/tri_box.hpp"

namespace aerovox {

GroupedClouds partition_groups(const SemanticPointCloud& cloud, const Taxonomy& taxonomy) {
  cloud.check_consistent();
  GroupedClouds out;
  for (size_t i = 0; i < cloud.size(); ++i) {
    switch (taxonomy.group(cloud.labels[i])) {  // throws on unknown class
      case ClassGroup::Instance:
        out.inst.push_back(cloud.positions[i], cloud.labels[i]);
        break;
      case ClassGroup::Ground:
        out.gnd.push_back(cloud.positions[i], cloud.labels[i]);
        break;
      case ClassGroup::Others:
        out.oth.push_back(cloud.positions[i], cloud.labels[i]);
        break;
    }
  }
  return out;
}

ClusterInstancesResult cluster_instances(const SemanticPointCloud& inst,
                                         const Taxonomy& taxonomy) {
  inst.check_consistent();
  ClusterInstancesResult out;
  for (auto cls : inst.labels)
    if (taxonomy.group(cls) != ClassGroup::Instance)
      throw std::invalid_argument("cluster_instances: point with non-instance class " +
                                  std::to_string(cls));

  for (const ClassSpec& spec : taxonomy.classes()) {
    if (spec.group != ClassGroup::Instance) continue;
    std::vector<std::uint32_t> indices;
    for (std::uint32_t i = 0; i < inst.size(); ++i)
      if (inst.labels[i] == spec.id) indices.push_back(i);
    if (indices.empty()) continue;

    std::vector<Vec3> positions(indices.size());
    for (size_t t = 0; t < indices.size(); ++t) positions[t] = inst.positions[indices[t]];
    const DbscanResult res = dbscan(positions, spec.dbscan_eps, spec.dbscan_min_pts);

    const size_t base = out.clusters.size();
    for (int c = 0; c < res.num_clusters; ++c) {
      InstanceCluster cl;
      cl.id = static_cast<int>(base) + c;
      cl.cls = spec.id;
      out.clusters.push_back(cl);
    }
    for (size_t t = 0; t < indices.size(); ++t) {
      if (res.assignment[t] < 0) {
        out.noise.push_back(positions[t], spec.id);
        continue;
      }
      InstanceCluster& cl = out.clusters[base + res.assignment[t]];
      if (cl.members.empty()) {
        cl.bbox_min = positions[t];
        cl.bbox_max = positions[t];
      } else {
        cl.bbox_min = cl.bbox_min.cwiseMin(positions[t]);
        cl.bbox_max = cl.bbox_max.cwiseMax(positions[t]);
      }
      cl.members.push_back(indices[t]);
    }
  }
  return out;
}

namespace {

// World-to-camera rotation looking from `eye` toward `target`, image-right
// roughly aligned with the world horizontal.
Pose look_at(const Vec3& eye, const Vec3& target) {
  const Vec3 forward = (target - eye).normalized();
  Vec3 right = Vec3(0, 0, 1).cross(forward);
  if (right.norm() < 1e-9) right = Vec3(0, 1, 0).cross(forward);
  right.normalize();
  const Vec3 down = forward.cross(right);
  Pose pose;
  pose.rotation.row(0) = right;
  pose.rotation.row(1) = down;
  pose.rotation.row(2) = forward;
  pose.translation = -(pose.rotation * eye);
  return pose;
}

}  // namespace

std::vector<VirtualView> place_virtual_cameras(const InstanceCluster& cluster, int K,
                                               int raster_px, double fit_dilation_m) {
  if (K < 2) throw std::invalid_argument("place_virtual_cameras: K must be >= 2");
  if (raster_px < 8) throw std::invalid_argument("place_virtual_cameras: raster too small");
  const Vec3 extent = cluster.bbox_max - cluster.bbox_min;
  const double diag = extent.norm();
  if (!(diag > 0.0))
    throw std::invalid_argument("place_virtual_cameras: degenerate cluster bbox");

  const Vec3 center = 0.5 * (cluster.bbox_min + cluster.bbox_max);
  // Enclosing sphere of the dilated bbox; the viewing distance is at least
  // twice its radius so cameras always stay well outside.
  const Vec3 half = 0.5 * extent + Vec3::Constant(std::max(0.0, fit_dilation_m));
  const double sphere_r = half.norm();
  const double dist = 2.0 * std::max(diag, sphere_r);
  // Focal fitted so the sphere's projected disc radius is 40% of the raster:
  // everything of interest lands inside the central 80% of the image.
  const double f =
      0.4 * raster_px * std::sqrt(dist * dist - sphere_r * sphere_r) / sphere_r;

  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<VirtualView> views(K);
  for (int k = 0; k < K; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / K;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * k;
    const Vec3 dir(rad * std::cos(phi), rad * std::sin(phi), z);

    VirtualView& view = views[k];
    view.frame.id = k;
    view.frame.intrinsics = {f, f, raster_px / 2.0, raster_px / 2.0, raster_px, raster_px};
    view.frame.pose = look_at(center + dist * dir, center);
  }
  return views;
}

void extract_silhouette(const std::vector<Vec3>& member_positions, VirtualView& view,
                        double alpha, int dilation_px,
                        const std::function<void(const std::string&)>& log) {
  const auto& in = view.frame.intrinsics;
  view.silhouette = Image<std::uint8_t>(in.width, in.height, 0);

  std::vector<std::array<double, 2>> proj;
  proj.reserve(member_positions.size());
  for (const Vec3& p : member_positions) {
    const Projection pr = project(p, view.frame);
    if (pr.depth <= 0.0) continue;  // cannot happen with fitted views; stay safe
    proj.push_back({pr.u, pr.v});
  }

  try {
    const auto kept = alpha_complex(proj, alpha);
    rasterize_triangles(proj, kept, view.silhouette);
  } catch (const std::invalid_argument&) {
    if (log) log("silhouette fallback: projected points are degenerate, using point stamp");
  }

  for (const auto& p : proj) {
    const int x = std::clamp(static_cast<int>(std::floor(p[0])), 0, in.width - 1);
    const int y = std::clamp(static_cast<int>(std::floor(p[1])), 0, in.height - 1);
    view.silhouette(x, y) = 1;
  }
  dilate(view.silhouette, dilation_px);
}

OccupiedSet carve(const InstanceCluster& cluster, const std::vector<VirtualView>& views,
                  const GridSpec& grid, int margin_vox) {
  grid.validate();
  if (views.empty()) throw std::invalid_argument("carve: need at least one view");
  if (margin_vox < 0) throw std::invalid_argument("carve: margin must be >= 0");
  for (const auto& v : views)
    if (v.silhouette.width != v.frame.intrinsics.width ||
        v.silhouette.height != v.frame.intrinsics.height)
      throw std::invalid_argument("carve: view has no extracted silhouette");

  const Vec3 lo = cluster.bbox_min - Vec3::Constant(margin_vox * grid.r);
  const Vec3 hi = cluster.bbox_max + Vec3::Constant(margin_vox * grid.r);

  const auto range_lo = [&](double v, double o, int n) {
    return std::clamp(static_cast<int>(std::floor((v - o) / grid.r)) - 1, 0, n - 1);
  };
  const auto range_hi = [&](double v, double o, int n) {
    return std::clamp(static_cast<int>(std::floor((v - o) / grid.r)) + 1, 0, n - 1);
  };
  const int i0 = range_lo(lo.x(), grid.origin.x(), grid.dims.x());
  const int i1 = range_hi(hi.x(), grid.origin.x(), grid.dims.x());
  const int j0 = range_lo(lo.y(), grid.origin.y(), grid.dims.y());
  const int j1 = range_hi(hi.y(), grid.origin.y(), grid.dims.y());
  const int k0 = range_lo(lo.z(), grid.origin.z(), grid.dims.z());
  const int k1 = range_hi(hi.z(), grid.origin.z(), grid.dims.z());

  OccupiedSet out(grid.dims);
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      for (int k = k0; k <= k1; ++k) {
        const Vec3 c = voxel_center({i, j, k}, grid);
        if (c.x() < lo.x() || c.x() > hi.x() || c.y() < lo.y() || c.y() > hi.y() ||
            c.z() < lo.z() || c.z() > hi.z())
          continue;
        bool inside = true;
        for (const auto& view : views) {
          const Projection pr = project(c, view.frame);
          if (pr.depth <= 0.0) {
            inside = false;
            break;
          }
          const int px = static_cast<int>(std::floor(pr.u));
          const int py = static_cast<int>(std::floor(pr.v));
          if (!view.silhouette.in_bounds(px, py) || view.silhouette(px, py) == 0) {
            inside = false;
            break;
          }
        }
        if (inside) out.insert({i, j, k}, cluster.cls);
      }
    }
  }
  return out;
}

ClassedMesh reconstruct_ground(const SemanticPointCloud& gnd) {
  gnd.check_consistent();
  if (gnd.size() < 3)
    throw std::invalid_argument("reconstruct_ground: need at least 3 points");

  std::vector<std::array<double, 2>> xy(gnd.size());
  for (size_t i = 0; i < gnd.size(); ++i)
    xy[i] = {gnd.positions[i].x(), gnd.positions[i].y()};

  const Triangulation tri = delaunay_triangulate(xy);  // throws when collinear
  ClassedMesh mesh;
  mesh.vertices = gnd.positions;
  mesh.classes = gnd.labels;
  mesh.triangles = tri.triangles;
  return mesh;
}

OccupiedSet voxelize_mesh(const ClassedMesh& mesh, const GridSpec& grid,
                          const Taxonomy& taxonomy) {
  grid.validate();
  if (mesh.empty()) throw std::invalid_argument("voxelize_mesh: empty mesh");

  OccupiedSet out(grid.dims);
  std::map<std::int64_t, std::map<std::uint16_t, std::uint32_t>> votes;
  const Vec3 box_half = Vec3::Constant(0.5 * grid.r);

  for (const auto& t : mesh.triangles) {
    const std::array<Vec3, 3> v = {mesh.vertices[t[0]], mesh.vertices[t[1]],
                                   mesh.vertices[t[2]]};
    const Vec3 tlo = v[0].cwiseMin(v[1]).cwiseMin(v[2]);
    const Vec3 thi = v[0].cwiseMax(v[1]).cwiseMax(v[2]);

    VoxelIndex a{static_cast<int>(std::floor((tlo.x() - grid.origin.x()) / grid.r)),
                 static_cast<int>(std::floor((tlo.y() - grid.origin.y()) / grid.r)),
                 static_cast<int>(std::floor((tlo.z() - grid.origin.z()) / grid.r))};
    VoxelIndex b{static_cast<int>(std::floor((thi.x() - grid.origin.x()) / grid.r)),
                 static_cast<int>(std::floor((thi.y() - grid.origin.y()) / grid.r)),
                 static_cast<int>(std::floor((thi.z() - grid.origin.z()) / grid.r))};
    a = {std::max(a.i, 0), std::max(a.j, 0), std::max(a.k, 0)};
    b = {std::min(b.i, grid.dims.x() - 1), std::min(b.j, grid.dims.y() - 1),
         std::min(b.k, grid.dims.z() - 1)};

    for (int i = a.i; i <= b.i; ++i)
      for (int j = a.j; j <= b.j; ++j)
        for (int k = a.k; k <= b.k; ++k)
          if (tri_box_overlap(v, voxel_center({i, j, k}, grid), box_half))
            out.insert({i, j, k}, 0);  // class filled below

    // Surface samples at <= r/2 spacing vote for their nearest vertex class.
    const double longest =
        std::max({(v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
    const int n = std::max(1, static_cast<int>(std::ceil(longest / (0.5 * grid.r))));
    for (int ia = 0; ia <= n; ++ia) {
      for (int ib = 0; ib <= n - ia; ++ib) {
        const double wa = static_cast<double>(ia) / n;
        const double wb = static_cast<double>(ib) / n;
        const double wc = 1.0 - wa - wb;
        const Vec3 p = wa * v[0] + wb * v[1] + wc * v[2];
        const auto vox = voxel_index(p, grid);
        if (!vox) continue;
        int nearest = 0;
        if (wb > wa && wb >= wc)
          nearest = 1;
        else if (wc > wa && wc > wb)
          nearest = 2;
        ++votes[out.key(*vox)][mesh.classes[t[nearest]]];
      }
    }
  }

  // Assign classes: sampled voxels by majority, unsampled overlap voxels by
  // the nearest mesh vertex to their center.
  KdTree vertex_tree;
  bool tree_built = false;
  for (auto& [key, cls] : out.voxels) {
    const auto it = votes.find(key);
    if (it != votes.end()) {
      cls = argmax_class(it->second, taxonomy);
      continue;
    }
    if (!tree_built) {
      vertex_tree = KdTree(mesh.vertices);
      tree_built = true;
    }
    const auto nb = vertex_tree.knn(voxel_center(out.unkey(key), grid), 1);
    cls = mesh.classes[nb.front().index];
  }
  return out;
}

OccupiedSet voxelize_points(const SemanticPointCloud& cloud, const GridSpec& grid,
                            const Taxonomy& taxonomy, std::uint64_t* dropped) {
  grid.validate();
  cloud.check_consistent();
  OccupiedSet out(grid.dims);
  std::map<std::int64_t, std::map<std::uint16_t, std::uint32_t>> votes;
  std::uint64_t outside = 0;
  for (size_t i = 0; i < cloud.size(); ++i) {
    const auto vox = voxel_index(cloud.positions[i], grid);
    if (!vox) {
      ++outside;
      continue;
    }
    ++votes[out.key(*vox)][cloud.labels[i]];
  }
  for (const auto& [key, tally] : votes) out.voxels[key] = argmax_class(tally, taxonomy);
  if (dropped) *dropped = outside;
  return out;
}

SceneGrid aggregate(const OccupiedSet& inst, const OccupiedSet& oth,
                    const OccupiedSet& gnd, const GridSpec& grid) {
  grid.validate();
  SceneGrid scene(grid);
  const auto apply = [&](const OccupiedSet& set, const char* name) {
    if (!set.voxels.empty() && !dims_equal(set.dims, grid.dims))
      throw std::invalid_argument(std::string("aggregate: ") + name +
                                  " set dims do not match the grid");
    for (const auto& [key, cls] : set.voxels) {
      if (key < 0 || key >= grid.voxel_count())
        throw std::invalid_argument(std::string("aggregate: ") + name +
                                    " voxel outside the grid");
      if (cls == 0)
        throw std::invalid_argument(std::string("aggregate: ") + name +
                                    " voxel with empty class");
      scene.labels.labels[static_cast<size_t>(key)] = cls;
    }
  };
  // Ascending precedence: later writes win.
  apply(gnd, "ground");
  apply(oth, "others");
  apply(inst, "instance");
  return scene;
}

int silhouette_dilation_px(const InstanceCluster& cluster,
                           const std::vector<VirtualView>& views, double voxel_r) {
  const Vec3 center = 0.5 * (cluster.bbox_min + cluster.bbox_max);
  double worst = 1.0;
  for (const auto& view : views) {
    const auto& in = view.frame.intrinsics;
    const double f = std::max(in.fx, in.fy);
    const double dist = (view.frame.pose.center() - center).norm();
    // Cameras are placed at >= 2x the cluster's enclosing-sphere radius, so
    // every relevant depth is >= dist/2. T bounds |x/z| inside the image.
    const double d_near = 0.5 * dist;
    const double T = std::max(in.width / (2.0 * in.fx), in.height / (2.0 * in.fy));
    const double shift = f * (voxel_r * std::sqrt(3.0) / 2.0) * (1.0 + T) / d_near;
    worst = std::max(worst, std::ceil(shift));
  }
  return 1 + static_cast<int>(worst);
}

SceneGrid densify_cloud(const SemanticPointCloud& cloud, const Taxonomy& taxonomy,
                        const GridSpec& grid, const DensifyParams& params,
                        DensifyStats* stats, const std::function<void(const std::string&)>& log) {
  grid.validate();
  GroupedClouds groups = partition_groups(cloud, taxonomy);

  ClusterInstancesResult clustering = cluster_instances(groups.inst, taxonomy);
  OccupiedSet inst_set(grid.dims);
  for (const InstanceCluster& cluster : clustering.clusters) {
    std::vector<Vec3> members(cluster.members.size());
    for (size_t i = 0; i < members.size(); ++i)
      members[i] = groups.inst.positions[cluster.members[i]];

    auto views = place_virtual_cameras(cluster, params.virtual_views,
                                       params.silhouette_raster_px,
                                       params.carve_margin_vox * grid.r);
    const int dil = silhouette_dilation_px(cluster, views, grid.r);
    for (auto& view : views) extract_silhouette(members, view, params.alpha, dil, log);

    const OccupiedSet carved = carve(cluster, views, grid, params.carve_margin_vox);
    // First cluster to claim a voxel keeps it (clusters are ordered by class
    // then discovery, so the outcome is deterministic).
    for (const auto& [key, cls] : carved.voxels) inst_set.voxels.emplace(key, cls);
  }

  // Unclustered residual joins the direct-voxelization branch.
  SemanticPointCloud oth_all = groups.oth;
  for (size_t i = 0; i < clustering.noise.size(); ++i)
    oth_all.push_back(clustering.noise.positions[i], clustering.noise.labels[i]);

  std::uint64_t dropped_oth = 0, dropped_gnd = 0;
  OccupiedSet gnd_set(grid.dims);
  if (!groups.gnd.empty()) {
    try {
      const ClassedMesh mesh = reconstruct_ground(groups.gnd);
      gnd_set = voxelize_mesh(mesh, grid, taxonomy);
    } catch (const std::invalid_argument&) {
      if (log) log("ground reconstruction degenerate, voxelizing ground points directly");
      gnd_set = voxelize_points(groups.gnd, grid, taxonomy, &dropped_gnd);
    }
  }
  const OccupiedSet oth_set = voxelize_points(oth_all, grid, taxonomy, &dropped_oth);

  if (stats) {
    stats->clusters = clustering.clusters.size();
    stats->noise_points = clustering.noise.size();
    stats->dropped_points = dropped_oth + dropped_gnd;
    stats->inst_voxels = static_cast<std::int64_t>(inst_set.size());
    stats->gnd_voxels = static_cast<std::int64_t>(gnd_set.size());
    stats->oth_voxels = static_cast<std::int64_t>(oth_set.size());
  }
  return aggregate(inst_set, oth_set, gnd_set, grid);
}

}  // namespace aerovox
