#include "aerovox/label_lifting.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "aerovox/knn.hpp"
#include "aerovox/parallel.hpp"

namespace aerovox {

VoteTable accumulate_votes(const std::vector<SemanticMask>& masks,
                           const std::vector<CorrespondenceSet>& correspondences,
                           size_t num_points) {
  std::unordered_map<int, const CorrespondenceSet*> by_id;
  by_id.reserve(correspondences.size());
  for (const auto& cs : correspondences) by_id[cs.frame_id] = &cs;

  VoteTable table(num_points);
  for (const auto& mask : masks) {
    const auto it = by_id.find(mask.frame_id);
    if (it == by_id.end())
      throw std::invalid_argument("accumulate_votes: no correspondences for frame " +
                                  std::to_string(mask.frame_id));
    for (const auto& pr : it->second->pairs) {
      if (!mask.classes.in_bounds(pr.u, pr.v))
        throw std::invalid_argument("accumulate_votes: correspondence outside mask for frame " +
                                    std::to_string(mask.frame_id));
      if (pr.point >= num_points)
        throw std::invalid_argument("accumulate_votes: point id out of range");
      const std::uint8_t cls = mask.classes(pr.u, pr.v);
      if (cls != 0) ++table.votes[pr.point][cls];
    }
  }
  return table;
}

namespace {

// Weighted vote over a (d2, index)-sorted neighbor list. Accumulation order
// is fixed by that sort, so sums are reproducible run to run.
std::uint16_t weighted_vote(const std::vector<KdTree::Neighbor>& neighbors,
                            const std::vector<std::uint16_t>& labels, double epsilon_d,
                            const Taxonomy& tax) {
  std::map<std::uint16_t, double> weight;
  for (const auto& nb : neighbors)
    weight[labels[nb.index]] += 1.0 / (std::sqrt(nb.d2) + epsilon_d);
  return argmax_class(weight, tax);
}

}  // namespace

std::vector<std::uint16_t> majority_vote(const VoteTable& votes, const Taxonomy& taxonomy) {
  std::vector<std::uint16_t> out(votes.size(), 0);
  for (size_t m = 0; m < votes.size(); ++m) out[m] = argmax_class(votes.votes[m], taxonomy);
  return out;
}

std::vector<std::uint16_t> knn_assign(const SemanticPointCloud& labeled,
                                      const std::vector<Vec3>& unlabeled, int k,
                                      double epsilon_d, const Taxonomy& taxonomy,
                                      int threads) {
  labeled.check_consistent();
  if (labeled.empty()) throw std::invalid_argument("knn_assign: empty labeled set");
  if (k < 1) throw std::invalid_argument("knn_assign: k must be >= 1");
  for (auto cls : labeled.labels)
    if (!taxonomy.valid_id(cls))
      throw std::invalid_argument("knn_assign: labeled set contains invalid class id");

  const KdTree tree(labeled.positions);
  std::vector<std::uint16_t> out(unlabeled.size(), 0);
  parallel_for(unlabeled.size(), threads, [&](size_t begin, size_t end) {
    for (size_t q = begin; q < end; ++q) {
      const auto neighbors = tree.knn(unlabeled[q], k);
      out[q] = weighted_vote(neighbors, labeled.labels, epsilon_d, taxonomy);
    }
  });
  return out;
}

SemanticPointCloud knn_refine(const SemanticPointCloud& cloud, int k, double epsilon_d,
                              const Taxonomy& taxonomy, int threads) {
  cloud.check_consistent();
  if (k < 1) throw std::invalid_argument("knn_refine: k must be >= 1");
  for (auto cls : cloud.labels)
    if (!taxonomy.valid_id(cls))
      throw std::invalid_argument("knn_refine: input contains unlabeled or invalid point");

  const KdTree tree(cloud.positions);
  SemanticPointCloud out = cloud;
  parallel_for(cloud.size(), threads, [&](size_t begin, size_t end) {
    for (size_t q = begin; q < end; ++q) {
      const auto neighbors =
          tree.knn(cloud.positions[q], k, static_cast<std::uint32_t>(q));
      if (neighbors.empty()) continue;
      out.labels[q] = weighted_vote(neighbors, cloud.labels, epsilon_d, taxonomy);
    }
  });
  return out;
}

}  // namespace aerovox
