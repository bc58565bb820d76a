#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aerovox {

// Semantic classes fall into one of three groups that are densified by
// different strategies and merged with instance > others > ground precedence.
enum class ClassGroup : std::uint8_t { Instance = 0, Ground = 1, Others = 2 };

struct ClassSpec {
  std::uint16_t id = 0;       // contiguous, starting at 1; 0 is reserved for "unlabeled"
  std::string name;
  ClassGroup group = ClassGroup::Others;
  double frequency = 0.0;     // share of annotated pixels, percent; drives tie-breaks
  double dbscan_eps = 0.0;    // meters; instance classes only
  int dbscan_min_pts = 0;     // instance classes only
};

class Taxonomy {
 public:
  Taxonomy() = default;
  explicit Taxonomy(std::vector<ClassSpec> classes);

  // The default aerial survey taxonomy: 22 classes with measured pixel
  // frequencies and per-class clustering parameters.
  static Taxonomy aerial_default();

  const std::vector<ClassSpec>& classes() const { return classes_; }
  size_t size() const { return classes_.size(); }
  bool valid_id(std::uint16_t id) const { return id >= 1 && id <= classes_.size(); }

  const ClassSpec& spec(std::uint16_t id) const;
  ClassGroup group(std::uint16_t id) const { return spec(id).group; }
  double frequency(std::uint16_t id) const { return spec(id).frequency; }
  const std::string& name(std::uint16_t id) const { return spec(id).name; }
  std::uint16_t id_of(const std::string& name) const;  // throws if unknown

  // Deterministic tie-break between classes: the more frequent class wins;
  // equal frequencies fall back to the smaller id.
  bool tie_wins(std::uint16_t a, std::uint16_t b) const {
    const double fa = frequency(a), fb = frequency(b);
    if (fa != fb) return fa > fb;
    return a < b;
  }

  bool has_group(ClassGroup g) const;

 private:
  std::vector<ClassSpec> classes_;  // index = id - 1
};

// Argmax over a class -> score map (count or weight), applying the shared
// tie rule. Iterates in the map's order; use an ordered map so the scan
// order, and with it any floating-point comparison sequence, is fixed.
// Returns 0 for an empty map.
template <typename Map>
std::uint16_t argmax_class(const Map& scores, const Taxonomy& taxonomy) {
  std::uint16_t best = 0;
  typename Map::mapped_type best_score{};
  for (const auto& [cls, score] : scores) {
    if (best == 0 || score > best_score ||
        (score == best_score && taxonomy.tie_wins(cls, best))) {
      best = cls;
      best_score = score;
    }
  }
  return best;
}

}  // namespace aerovox
