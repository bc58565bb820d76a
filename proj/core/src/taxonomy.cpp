#include "aerovox/taxonomy.hpp"

#include <stdexcept>

namespace aerovox {

Taxonomy::Taxonomy(std::vector<ClassSpec> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw std::invalid_argument("Taxonomy: no classes");
  for (size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].id != i + 1)
      throw std::invalid_argument("Taxonomy: ids must be contiguous starting at 1");
    if (classes_[i].name.empty())
      throw std::invalid_argument("Taxonomy: class names must be non-empty");
    if (classes_[i].group == ClassGroup::Instance &&
        (classes_[i].dbscan_eps <= 0.0 || classes_[i].dbscan_min_pts <= 0))
      throw std::invalid_argument("Taxonomy: instance class '" + classes_[i].name +
                                  "' needs positive clustering parameters");
  }
}

const ClassSpec& Taxonomy::spec(std::uint16_t id) const {
  if (!valid_id(id)) throw std::out_of_range("Taxonomy: unknown class id " + std::to_string(id));
  return classes_[id - 1];
}

std::uint16_t Taxonomy::id_of(const std::string& name) const {
  for (const auto& c : classes_)
    if (c.name == name) return c.id;
  throw std::out_of_range("Taxonomy: unknown class name '" + name + "'");
}

bool Taxonomy::has_group(ClassGroup g) const {
  for (const auto& c : classes_)
    if (c.group == g) return true;
  return false;
}

Taxonomy Taxonomy::aerial_default() {
  using G = ClassGroup;
  // {id, name, group, frequency %, dbscan eps m, dbscan min_pts}
  return Taxonomy({
      {1, "building", G::Instance, 75.7457, 4.0, 1000},
      {2, "roof", G::Instance, 1.7417, 1.0, 1000},
      {3, "vehicle", G::Instance, 0.5195, 1.0, 500},
      {4, "crane", G::Instance, 0.0052, 1.0, 500},
      {5, "bicycle", G::Instance, 0.0046, 0.4, 80},
      {6, "person", G::Instance, 0.0002, 0.3, 10},
      {7, "flying_animal", G::Instance, 0.0001, 0.3, 30},
      {8, "truck", G::Instance, 0.1067, 1.0, 500},
      {9, "grass", G::Ground, 4.1978, 0.0, 0},
      {10, "vegetation", G::Ground, 2.3234, 0.0, 0},
      {11, "water", G::Ground, 1.1322, 0.0, 0},
      {12, "walkway", G::Ground, 1.0560, 0.0, 0},
      {13, "dirt", G::Ground, 1.2102, 0.0, 0},
      {14, "road", G::Ground, 0.9377, 0.0, 0},
      {15, "gravel", G::Ground, 0.7960, 0.0, 0},
      {16, "parking_lot", G::Ground, 1.4349, 0.0, 0},
      {17, "tree", G::Others, 6.8357, 0.0, 0},
      {18, "ground_obstacle", G::Others, 1.7566, 0.0, 0},
      {19, "construction", G::Others, 0.1689, 0.0, 0},
      {20, "cable_tower", G::Others, 0.0040, 0.0, 0},
      {21, "rock", G::Others, 0.0210, 0.0, 0},
      {22, "cable", G::Others, 0.0017, 0.0, 0},
  });
}

}  // namespace aerovox
