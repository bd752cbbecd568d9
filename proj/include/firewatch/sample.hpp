#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace firewatch {

/// Binary class of a sample. Values match the on-disk label column.
enum class ClassLabel : int { no_fire = 0, fire = 1 };

/// Maps 0 -> no_fire, 1 -> fire; anything else throws InvalidInput.
ClassLabel label_from_int(int value);
constexpr int to_int(ClassLabel label) { return static_cast<int>(label); }

/// +1 for fire, -1 for no_fire.
constexpr double signed_label(ClassLabel label) {
  return label == ClassLabel::fire ? 1.0 : -1.0;
}

/// Nonempty vector of finite reals. For this system d = 3
/// (temperature, smoke, flame) in raw sensor units.
class FeatureVector {
 public:
  FeatureVector(std::initializer_list<double> values);
  explicit FeatureVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

struct LabeledSample {
  FeatureVector features;
  ClassLabel label;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

}  // namespace firewatch
