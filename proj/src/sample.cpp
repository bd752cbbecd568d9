#include "firewatch/sample.hpp"

#include <cmath>
#include <string>

#include "firewatch/error.hpp"

namespace firewatch {

ClassLabel label_from_int(int value) {
  if (value == 0) return ClassLabel::no_fire;
  if (value == 1) return ClassLabel::fire;
  throw InvalidInput("class label must be 0 or 1, got " + std::to_string(value));
}

FeatureVector::FeatureVector(std::initializer_list<double> values)
    : FeatureVector(std::vector<double>(values)) {}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("feature vector must have at least one entry");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("feature " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace firewatch
