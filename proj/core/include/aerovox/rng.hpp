#pragma once

#include <cstdint>

namespace aerovox {

// splitmix64. Used everywhere randomness is needed so that outputs are
// reproducible across platforms and standard library versions (std::mt19937
// distributions are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). n must be positive; modulo bias is irrelevant
  // for the small n used here but we reject to keep streams well defined.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Derives an independent stream; used to decouple per-entity sampling from
  // the order in which entities are generated.
  Rng fork(std::uint64_t salt) {
    return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x52dce729ULL));
  }

 private:
  std::uint64_t state_;
};

}  // namespace aerovox
