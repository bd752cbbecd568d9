#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firewatch/sample.hpp"

namespace firewatch {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Counts agreement between predictions and ground truth. Both spans must be
/// nonempty and equally long.
ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> actual);

/// Rates derived from a confusion matrix. A rate whose denominator is zero is
/// undefined (nullopt), which is distinct from 0.
struct MetricsReport {
  std::optional<double> tpr;        ///< TP / (TP + FN), a.k.a. recall
  std::optional<double> fpr;        ///< FP / (FP + TN)
  std::optional<double> precision;  ///< TP / (TP + FP)
  double accuracy = 0.0;            ///< (TP + TN) / N
  double error_rate = 0.0;          ///< (FP + FN) / N
  std::size_t n = 0;
};

MetricsReport metrics(const ConfusionMatrix& cm);

/// `metric=value` lines (tp, tn, fp, fn, n, tpr, fpr, precision, accuracy,
/// error_rate). Undefined rates print as `undefined`.
std::string format_report(const ConfusionMatrix& cm, const MetricsReport& report);
std::string report_json(const ConfusionMatrix& cm, const MetricsReport& report);

struct RocPoint {
  double fpr;
  double tpr;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  ///< from (0,0) to (1,1), nondecreasing in both axes
  double auc = 0.0;
};

/// Sweeps a threshold over the distinct scores, predicting fire when
/// score >= threshold. Equal scores collapse into one point; AUC is the
/// trapezoidal area. Throws InvalidInput unless both classes are present.
RocCurve roc(std::span<const double> scores, std::span<const ClassLabel> actual);

std::string roc_json(const RocCurve& curve);

}  // namespace firewatch
