#include "aerovox/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace aerovox {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

int KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_[node_id].begin = begin;
  nodes_[node_id].end = end;
  if (end - begin <= kLeafSize) return node_id;

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t t = begin + 1; t < end; ++t) {
    lo = lo.cwiseMin(points_[order_[t]]);
    hi = hi.cwiseMax(points_[order_[t]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const std::uint32_t mid = begin + (end - begin) / 2;
  // (coordinate, index) is a strict total order, so the partition is
  // reproducible regardless of nth_element's internal choices.
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = points_[a][axis], cb = points_[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  nodes_[node_id].axis = axis;
  nodes_[node_id].split = points_[order_[mid]][axis];
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

namespace {

// Fixed-capacity max-heap over (d2, index); the root is the current worst
// neighbor under the lexicographic order.
struct NeighborHeap {
  std::vector<KdTree::Neighbor>& v;
  size_t cap;

  bool full() const { return v.size() == cap; }
  const KdTree::Neighbor& worst() const { return v.front(); }

  static bool less(const KdTree::Neighbor& a, const KdTree::Neighbor& b) { return a < b; }

  void push(const KdTree::Neighbor& n) {
    if (!full()) {
      v.push_back(n);
      std::push_heap(v.begin(), v.end(), less);
    } else if (n < v.front()) {
      std::pop_heap(v.begin(), v.end(), less);
      v.back() = n;
      std::push_heap(v.begin(), v.end(), less);
    }
  }
};

}  // namespace

std::vector<KdTree::Neighbor> KdTree::knn(const Vec3& query, int k,
                                          std::uint32_t skip) const {
  if (k < 1) throw std::invalid_argument("KdTree::knn: k must be >= 1");
  std::vector<Neighbor> result;
  if (points_.empty()) return result;
  result.reserve(static_cast<size_t>(k) + 1);
  NeighborHeap heap{result, static_cast<size_t>(k)};

  // Iterative DFS, near child first. A subtree is visited unless the heap is
  // full and every point in it is strictly worse than the current worst;
  // equality must still descend because a tied distance with a smaller index
  // wins under the lexicographic order.
  std::vector<int> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];

    if (n.axis < 0) {
      for (std::uint32_t t = n.begin; t < n.end; ++t) {
        const std::uint32_t idx = order_[t];
        if (idx == skip) continue;
        const double d2 = (points_[idx] - query).squaredNorm();
        heap.push({d2, idx});
      }
      continue;
    }

    const double delta = query[n.axis] - n.split;
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;
    if (!heap.full() || delta * delta <= heap.worst().d2) stack.push_back(far);
    stack.push_back(near);
  }

  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace aerovox
