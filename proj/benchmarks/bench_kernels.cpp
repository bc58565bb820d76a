#include <benchmark/benchmark.h>

#include <vector>

#include "aerovox/dbscan.hpp"
#include "aerovox/densify.hpp"
#include "aerovox/gt_sampling.hpp"
#include "aerovox/knn.hpp"
#include "aerovox/rng.hpp"

namespace {

using namespace aerovox;

std::vector<Vec3> random_points(size_t n, double extent, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (size_t i = 0; i < n; ++i)
    pts.emplace_back(rng.uniform(0, extent), rng.uniform(0, extent), rng.uniform(0, extent));
  return pts;
}

void BM_KdTreeBuild(benchmark::State& state) {
  const auto pts = random_points(static_cast<size_t>(state.range(0)), 100.0, 1);
  for (auto _ : state) {
    KdTree tree(pts);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_KdTreeBuild)->Arg(10000)->Arg(100000);

void BM_KdTreeQueryK100(benchmark::State& state) {
  const auto pts = random_points(static_cast<size_t>(state.range(0)), 100.0, 1);
  const KdTree tree(pts);
  const auto queries = random_points(256, 100.0, 2);
  size_t q = 0;
  for (auto _ : state) {
    auto out = tree.knn(queries[q++ % queries.size()], 100);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_KdTreeQueryK100)->Arg(10000)->Arg(100000);

void BM_Dbscan(benchmark::State& state) {
  // Dense blob plus background noise, vehicle-like parameters.
  auto pts = random_points(static_cast<size_t>(state.range(0)), 50.0, 3);
  const auto blob = random_points(600, 2.0, 4);
  pts.insert(pts.end(), blob.begin(), blob.end());
  for (auto _ : state) {
    auto result = dbscan(pts, 1.0, 500);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_Dbscan)->Arg(2000)->Arg(20000);

void BM_Carve(benchmark::State& state) {
  Rng rng(5);
  InstanceCluster cluster;
  cluster.id = 0;
  cluster.cls = 1;
  std::vector<Vec3> members;
  for (int i = 0; i < 2000; ++i)
    members.emplace_back(rng.uniform(10, 20), rng.uniform(10, 18), rng.uniform(0, 6));
  cluster.bbox_min = Vec3(10, 10, 0);
  cluster.bbox_max = Vec3(20, 18, 6);
  for (const Vec3& p : members) {
    cluster.bbox_min = cluster.bbox_min.cwiseMin(p);
    cluster.bbox_max = cluster.bbox_max.cwiseMax(p);
  }

  GridSpec grid;
  grid.dims = Vec3i(64, 64, 32);
  grid.r = 0.5;
  grid.origin = Vec3(0, 0, -2);

  auto views = place_virtual_cameras(cluster, 24, 256, 2 * grid.r);
  const int dil = silhouette_dilation_px(cluster, views, grid.r);
  for (auto& view : views) extract_silhouette(members, view, 0.05, dil);

  for (auto _ : state) {
    auto carved = carve(cluster, views, grid, 2);
    benchmark::DoNotOptimize(carved);
  }
}
BENCHMARK(BM_Carve);

void BM_TraceRays(benchmark::State& state) {
  Rng rng(6);
  FrameGrid grid;
  grid.spec.dims = Vec3i(96, 64, 64);
  grid.spec.r = 0.5;
  grid.spec.d_min = 0.5;
  grid.labels = LabelVolume(grid.spec.dims);
  for (auto& v : grid.labels.labels)
    if (rng.next_double() < 0.05) v = 1;

  CameraFrame frame;
  frame.id = 1;
  frame.intrinsics = {96.0, 96.0, 48.0, 36.0, 96, 72};

  for (auto _ : state) {
    auto trace = trace_rays(grid, frame);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_TraceRays);

}  // namespace

BENCHMARK_MAIN();
