#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace aerovox {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over disjoint chunks of [0, n). Outputs must be
// per-index; the split is deterministic so per-index results do not depend
// on the thread count.
inline void parallel_for(size_t n, int threads,
                         const std::function<void(size_t, size_t)>& fn) {
  threads = std::min<size_t>(resolve_threads(threads), n == 0 ? 1 : n);
  if (threads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const size_t begin = static_cast<size_t>(t) * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace aerovox
