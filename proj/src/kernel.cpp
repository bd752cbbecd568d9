#include <cmath>
#include <string>

#include "firewatch/error.hpp"
#include "firewatch/svm.hpp"

namespace firewatch {

void KernelConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("kernel gamma must be positive and finite");
  }
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg) {
  cfg.validate();
  if (a.size() != b.size()) {
    throw InvalidInput("kernel operands differ in dimension (" + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()) + ")");
  }
  // (a-b)^2 == (b-a)^2 bit for bit, so the result is symmetric in a and b.
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    dist2 += d * d;
  }
  return std::exp(-cfg.gamma * dist2);
}

double rbf_kernel(const FeatureVector& a, const FeatureVector& b, const KernelConfig& cfg) {
  return rbf_kernel(a.values(), b.values(), cfg);
}

KernelMatrix kernel_matrix(std::span<const FeatureVector> xs, const KernelConfig& cfg) {
  cfg.validate();
  if (xs.empty()) throw InvalidInput("kernel matrix needs at least one vector");
  const std::size_t n = xs.size();
  const std::size_t dim = xs.front().size();
  for (const auto& x : xs) {
    if (x.size() != dim) throw InvalidInput("kernel matrix inputs have mixed dimensions");
  }
  KernelMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf_kernel(xs[i], xs[j], cfg);
      m(i, j) = k;
      m(j, i) = k;
    }
  }
  return m;
}

double dual_objective(std::span<const double> alphas, std::span<const LabeledSample> data,
                      const KernelConfig& kernel) {
  if (alphas.size() != data.size()) {
    throw InvalidInput("dual_objective: " + std::to_string(alphas.size()) + " alphas for " +
                       std::to_string(data.size()) + " samples");
  }
  kernel.validate();
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    linear += alphas[i];
    if (alphas[i] == 0.0) continue;
    const double yi = signed_label(data[i].label);
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (alphas[j] == 0.0) continue;
      const double yj = signed_label(data[j].label);
      quadratic += alphas[i] * alphas[j] * yi * yj *
                   rbf_kernel(data[i].features, data[j].features, kernel);
    }
  }
  return linear - 0.5 * quadratic;
}

}  // namespace firewatch
