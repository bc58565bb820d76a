#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aerovox/correspondence.hpp"
#include "aerovox/image.hpp"
#include "aerovox/point_cloud.hpp"
#include "aerovox/taxonomy.hpp"

namespace aerovox {

// Per-point class vote counts accumulated across annotated views.
struct VoteTable {
  std::vector<std::map<std::uint16_t, std::uint32_t>> votes;

  explicit VoteTable(size_t num_points = 0) : votes(num_points) {}
  size_t size() const { return votes.size(); }
};

// Counts one vote (point, class) for every correspondence whose mask pixel is
// labeled; class 0 pixels contribute nothing. Each mask must have a
// correspondence set with a matching frame id, and every correspondence pixel
// must lie inside the mask.
VoteTable accumulate_votes(const std::vector<SemanticMask>& masks,
                           const std::vector<CorrespondenceSet>& correspondences,
                           size_t num_points);

// Per-point argmax of vote counts; ties go to the more frequent class, then
// the smaller id. Points without votes stay 0.
std::vector<std::uint16_t> majority_vote(const VoteTable& votes, const Taxonomy& taxonomy);

// Labels each query position by an inverse-distance-weighted class vote over
// its k nearest labeled points: argmax_c sum 1/(d + epsilon_d). Ties resolve
// as in majority_vote.
std::vector<std::uint16_t> knn_assign(const SemanticPointCloud& labeled,
                                      const std::vector<Vec3>& unlabeled, int k,
                                      double epsilon_d, const Taxonomy& taxonomy,
                                      int threads = 1);

// Simultaneously relabels every point to the weighted dominant class among
// its k nearest neighbors (itself excluded), all votes read from the
// pre-refinement labels. A point with no neighbors keeps its label.
SemanticPointCloud knn_refine(const SemanticPointCloud& cloud, int k, double epsilon_d,
                              const Taxonomy& taxonomy, int threads = 1);

}  // namespace aerovox
