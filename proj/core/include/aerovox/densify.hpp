#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aerovox/camera.hpp"
#include "aerovox/grid.hpp"
#include "aerovox/image.hpp"
#include "aerovox/mesh.hpp"
#include "aerovox/point_cloud.hpp"
#include "aerovox/taxonomy.hpp"

namespace aerovox {

// The three densification branches of the labeled cloud.
struct GroupedClouds {
  SemanticPointCloud inst;
  SemanticPointCloud gnd;
  SemanticPointCloud oth;
};

// Routes every point to the branch of its class's group.
GroupedClouds partition_groups(const SemanticPointCloud& cloud, const Taxonomy& taxonomy);

struct InstanceCluster {
  int id = -1;
  std::uint16_t cls = 0;
  std::vector<std::uint32_t> members;  // indices into the instance cloud
  Vec3 bbox_min = Vec3::Zero();        // tight bounds of the member points
  Vec3 bbox_max = Vec3::Zero();
};

struct ClusterInstancesResult {
  std::vector<InstanceCluster> clusters;
  SemanticPointCloud noise;  // unclustered residual, kept for direct voxelization
};

// Per-class DBSCAN over the instance cloud with the taxonomy's (eps, min_pts).
// Classes are processed in ascending id; cluster ids are global and
// sequential in that order.
ClusterInstancesResult cluster_instances(const SemanticPointCloud& inst,
                                         const Taxonomy& taxonomy);

struct VirtualView {
  CameraFrame frame;
  Image<std::uint8_t> silhouette;  // empty until extract_silhouette fills it
};

// K virtual pinhole cameras on a Fibonacci-spiral sphere around the cluster,
// radius twice the bbox diagonal (at least twice the enclosing-sphere radius
// for safety), all looking at the bbox centroid. The focal length is fitted
// so the bbox dilated by `fit_dilation_m` projects inside the raster with a
// 10% margin on every side. Silhouettes are left empty.
std::vector<VirtualView> place_virtual_cameras(const InstanceCluster& cluster, int K,
                                               int raster_px, double fit_dilation_m);

// Projects the member positions into the view, computes the filled alpha
// complex on normalized image coordinates, rasterizes it, stamps every
// projected point's pixel, and dilates by `dilation_px`. Fewer than 3
// distinct or all-collinear projections fall back to the dilated point
// stamp alone (reported via the optional log callback).
void extract_silhouette(const std::vector<Vec3>& member_positions, VirtualView& view,
                        double alpha, int dilation_px,
                        const std::function<void(const std::string&)>& log = nullptr);

// Visual hull carving. A scene-grid voxel whose center lies inside the
// cluster bbox dilated by margin_vox voxels is occupied iff the center
// projects onto a set silhouette pixel in every view; occupied voxels carry
// the cluster class.
OccupiedSet carve(const InstanceCluster& cluster, const std::vector<VirtualView>& views,
                  const GridSpec& grid, int margin_vox);

// Height-field surface over the ground points: Delaunay triangulation of the
// (x,y) projection, keeping input elevations at the vertices. Triangles span
// interior holes, so the surface is continuous over the footprint's convex
// hull. Duplicate (x,y) locations keep their first occurrence. Vertex class
// is the input point's own class.
ClassedMesh reconstruct_ground(const SemanticPointCloud& gnd);

// Conservative triangle scan conversion: every voxel overlapping a triangle
// (closed-set SAT test) is occupied. Class = majority over surface samples
// (spacing <= r/2, each sample voting its nearest triangle vertex's class);
// overlapped voxels that receive no sample take the class of the mesh vertex
// nearest their center.
OccupiedSet voxelize_mesh(const ClassedMesh& mesh, const GridSpec& grid,
                          const Taxonomy& taxonomy);

// Bins points into voxels; per-voxel majority class. Points outside the grid
// are dropped and counted into *dropped when given.
OccupiedSet voxelize_points(const SemanticPointCloud& cloud, const GridSpec& grid,
                            const Taxonomy& taxonomy, std::uint64_t* dropped = nullptr);

// Merges the three branches with instance > others > ground precedence;
// voxels in no set stay 0.
SceneGrid aggregate(const OccupiedSet& inst, const OccupiedSet& oth,
                    const OccupiedSet& gnd, const GridSpec& grid);

struct DensifyParams {
  int virtual_views = 24;
  int silhouette_raster_px = 256;
  double alpha = 0.05;
  int carve_margin_vox = 2;
  int threads = 1;
};

struct DensifyStats {
  size_t clusters = 0;
  size_t noise_points = 0;
  std::uint64_t dropped_points = 0;
  std::int64_t inst_voxels = 0;
  std::int64_t gnd_voxels = 0;
  std::int64_t oth_voxels = 0;
};

// Full densification: partition, cluster + carve instances (noise joins the
// direct-voxelization branch), reconstruct + voxelize ground, voxelize the
// rest, aggregate. The per-view silhouette dilation is chosen so that the
// projection of any voxel center within half a voxel diagonal of a member
// point stays inside the silhouette, which makes carving a superset of the
// member-point voxels.
SceneGrid densify_cloud(const SemanticPointCloud& cloud, const Taxonomy& taxonomy,
                        const GridSpec& grid, const DensifyParams& params,
                        DensifyStats* stats = nullptr,
                        const std::function<void(const std::string&)>& log = nullptr);

// The dilation rule above, exposed for tests and debug tooling.
int silhouette_dilation_px(const InstanceCluster& cluster,
                           const std::vector<VirtualView>& views, double voxel_r);

}  // namespace aerovox
