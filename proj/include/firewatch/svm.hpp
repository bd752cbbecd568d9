#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "firewatch/sample.hpp"

namespace firewatch {

/// RBF width. gamma = 1 / (2 sigma^2), in 1 / feature-units^2.
struct KernelConfig {
  double gamma = 1.0 / 3.0;

  void validate() const;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct TrainConfig {
  double c = 1.0;               ///< box constraint: 0 <= alpha_i <= c
  double kkt_tolerance = 1e-3;
  int max_passes = 200;         ///< full sweeps over the training set
  std::uint64_t rng_seed = 0;
  bool standardize = true;      ///< z-score features on the training data

  void validate() const;
};

/// Per-feature affine map x -> (x - mean) / scale, fitted on training data.
struct FeatureScaling {
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureScaling identity(std::size_t dim);
  /// Population mean and standard deviation. A zero-variance feature gets
  /// scale 1 so it passes through centred but unscaled.
  static FeatureScaling fit(std::span<const LabeledSample> data);

  std::size_t dim() const { return mean.size(); }
  FeatureVector apply(const FeatureVector& x) const;

  friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

/// exp(-gamma * ||a - b||^2). Throws InvalidInput on dimension mismatch.
double rbf_kernel(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg);
double rbf_kernel(const FeatureVector& a, const FeatureVector& b, const KernelConfig& cfg);

/// Dense symmetric Gram matrix, row-major.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

KernelMatrix kernel_matrix(std::span<const FeatureVector> xs, const KernelConfig& cfg);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
/// with y in {-1, +1}. Features are used as given (no scaling).
double dual_objective(std::span<const double> alphas, std::span<const LabeledSample> data,
                      const KernelConfig& kernel);

enum class TrainStatus {
  converged,
  not_converged,  ///< max_passes exhausted; the model is the best feasible point reached
  degenerate,     ///< converged, but no free support vector pins the bias
};

std::string to_string(TrainStatus status);

/// Raw output of the SMO solver, indexed like the training set.
struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  TrainStatus status = TrainStatus::not_converged;
  int passes = 0;
  /// Largest KKT residual over all points at the returned (alphas, bias).
  double max_kkt_violation = 0.0;
};

/// Sequential minimal optimization on a precomputed Gram matrix.
/// `signed_labels` holds +1/-1 per sample and must contain both signs.
DualSolution solve_dual(const KernelMatrix& gram, std::span<const double> signed_labels,
                        const TrainConfig& cfg);

/// Trained classifier. Support vectors are stored in scaled coordinates;
/// decision_value() scales its raw input first.
class SvmModel {
 public:
  SvmModel(std::vector<FeatureVector> support_vectors, std::vector<double> alphas,
           std::vector<double> signed_labels, double bias, KernelConfig kernel, double c,
           FeatureScaling scaling);

  const std::vector<FeatureVector>& support_vectors() const { return support_vectors_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& signed_labels() const { return signed_labels_; }
  double bias() const { return bias_; }
  const KernelConfig& kernel() const { return kernel_; }
  double c() const { return c_; }
  const FeatureScaling& scaling() const { return scaling_; }
  std::size_t dim() const { return scaling_.dim(); }

  friend bool operator==(const SvmModel&, const SvmModel&) = default;

 private:
  std::vector<FeatureVector> support_vectors_;
  std::vector<double> alphas_;
  std::vector<double> signed_labels_;
  double bias_;
  KernelConfig kernel_;
  double c_;
  FeatureScaling scaling_;
};

struct TrainResult {
  SvmModel model;
  TrainStatus status;
  int passes;
  double max_kkt_violation;
};

/// Fits an RBF soft-margin SVM. Throws TrainingError if only one class is
/// present and InvalidInput on empty or ragged data. Non-convergence is
/// reported through TrainResult::status.
TrainResult train(std::span<const LabeledSample> data, const KernelConfig& kernel,
                  const TrainConfig& cfg);

/// sum_i alpha_i y_i K(sv_i, scale(x)) + b, with `x` in raw units.
double decision_value(const SvmModel& model, const FeatureVector& x);

/// fire iff decision_value >= 0.
ClassLabel predict(const SvmModel& model, const FeatureVector& x);

// Text persistence:
//   firewatch-svm v1 d=<dim> gamma=<g> C=<c> b=<bias> n_sv=<k> scale=<m1,s1;...>
// followed by k lines "<alpha> <signed_label> <f1> ... <fd>".
void save_model(const SvmModel& model, std::ostream& out);
std::string save_model(const SvmModel& model);
SvmModel load_model(std::istream& in);
void save_model_file(const SvmModel& model, const std::string& path);
SvmModel load_model_file(const std::string& path);

}  // namespace firewatch
