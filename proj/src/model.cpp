#include <cmath>
#include <string>

#include "firewatch/error.hpp"
#include "firewatch/svm.hpp"

namespace firewatch {

FeatureScaling FeatureScaling::identity(std::size_t dim) {
  return FeatureScaling{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

FeatureScaling FeatureScaling::fit(std::span<const LabeledSample> data) {
  if (data.empty()) throw InvalidInput("cannot fit feature scaling on an empty set");
  const std::size_t dim = data.front().features.size();
  const auto n = static_cast<double>(data.size());
  FeatureScaling s{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
  for (std::size_t f = 0; f < dim; ++f) {
    double sum = 0.0;
    for (const auto& row : data) sum += row.features[f];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& row : data) {
      const double d = row.features[f] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    s.mean[f] = mean;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

FeatureVector FeatureScaling::apply(const FeatureVector& x) const {
  if (x.size() != dim()) {
    throw InvalidInput("expected " + std::to_string(dim()) + " features, got " +
                       std::to_string(x.size()));
  }
  std::vector<double> out(dim());
  for (std::size_t f = 0; f < dim(); ++f) out[f] = (x[f] - mean[f]) / scale[f];
  return FeatureVector(std::move(out));
}

SvmModel::SvmModel(std::vector<FeatureVector> support_vectors, std::vector<double> alphas,
                   std::vector<double> signed_labels, double bias, KernelConfig kernel, double c,
                   FeatureScaling scaling)
    : support_vectors_(std::move(support_vectors)),
      alphas_(std::move(alphas)),
      signed_labels_(std::move(signed_labels)),
      bias_(bias),
      kernel_(kernel),
      c_(c),
      scaling_(std::move(scaling)) {
  kernel_.validate();
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw InvalidInput("model C must be positive");
  if (!std::isfinite(bias_)) throw InvalidInput("model bias is not finite");
  if (support_vectors_.empty()) throw InvalidInput("model needs at least one support vector");
  if (alphas_.size() != support_vectors_.size() || signed_labels_.size() != support_vectors_.size()) {
    throw InvalidInput("support vectors, alphas and labels differ in length");
  }
  if (scaling_.mean.empty() || scaling_.mean.size() != scaling_.scale.size()) {
    throw InvalidInput("model scaling is malformed");
  }
  for (std::size_t f = 0; f < scaling_.dim(); ++f) {
    if (!std::isfinite(scaling_.mean[f]) || !(scaling_.scale[f] > 0.0) ||
        !std::isfinite(scaling_.scale[f])) {
      throw InvalidInput("model scaling for feature " + std::to_string(f) + " is invalid");
    }
  }
  for (std::size_t i = 0; i < support_vectors_.size(); ++i) {
    if (support_vectors_[i].size() != scaling_.dim()) {
      throw InvalidInput("support vector " + std::to_string(i) + " has the wrong dimension");
    }
    if (!(alphas_[i] > 0.0) || !(alphas_[i] <= c_)) {
      throw InvalidInput("alpha " + std::to_string(i) + " is outside (0, C]");
    }
    if (signed_labels_[i] != 1.0 && signed_labels_[i] != -1.0) {
      throw InvalidInput("signed label " + std::to_string(i) + " is not +1 or -1");
    }
  }
}

TrainResult train(std::span<const LabeledSample> data, const KernelConfig& kernel,
                  const TrainConfig& cfg) {
  kernel.validate();
  cfg.validate();
  if (data.empty()) throw InvalidInput("training set is empty");
  const std::size_t dim = data.front().features.size();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].features.size() != dim) {
      throw InvalidInput("sample " + std::to_string(i) + " has " +
                         std::to_string(data[i].features.size()) + " features, expected " +
                         std::to_string(dim));
    }
  }

  FeatureScaling scaling = cfg.standardize ? FeatureScaling::fit(data) : FeatureScaling::identity(dim);
  std::vector<FeatureVector> xs;
  std::vector<double> ys;
  xs.reserve(data.size());
  ys.reserve(data.size());
  for (const auto& row : data) {
    xs.push_back(scaling.apply(row.features));
    ys.push_back(signed_label(row.label));
  }

  const DualSolution dual = solve_dual(kernel_matrix(xs, kernel), ys, cfg);

  std::vector<FeatureVector> svs;
  std::vector<double> alphas;
  std::vector<double> labels;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (dual.alphas[i] > 0.0) {
      svs.push_back(xs[i]);
      alphas.push_back(dual.alphas[i]);
      labels.push_back(ys[i]);
    }
  }
  if (svs.empty()) throw TrainingError("solver produced no support vectors");

  return TrainResult{SvmModel(std::move(svs), std::move(alphas), std::move(labels), dual.bias,
                              kernel, cfg.c, std::move(scaling)),
                     dual.status, dual.passes, dual.max_kkt_violation};
}

double decision_value(const SvmModel& model, const FeatureVector& x) {
  const FeatureVector z = model.scaling().apply(x);
  double sum = 0.0;
  const auto& svs = model.support_vectors();
  for (std::size_t i = 0; i < svs.size(); ++i) {
    sum += model.alphas()[i] * model.signed_labels()[i] * rbf_kernel(svs[i], z, model.kernel());
  }
  return sum + model.bias();
}

ClassLabel predict(const SvmModel& model, const FeatureVector& x) {
  return decision_value(model, x) >= 0.0 ? ClassLabel::fire : ClassLabel::no_fire;
}

}  // namespace firewatch
