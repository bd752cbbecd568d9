#include "firewatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "firewatch/error.hpp"
#include "firewatch/numeric.hpp"

namespace firewatch {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string render(const std::optional<double>& v) { return v ? format_real(*v) : "undefined"; }

nlohmann::json to_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> actual) {
  if (predicted.size() != actual.size()) {
    throw InvalidInput("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                       std::to_string(actual.size()) + " labels");
  }
  if (predicted.empty()) throw InvalidInput("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == ClassLabel::fire;
    const bool a = actual[i] == ClassLabel::fire;
    if (p && a) {
      ++cm.tp;
    } else if (!p && !a) {
      ++cm.tn;
    } else if (p) {
      ++cm.fp;
    } else {
      ++cm.fn;
    }
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::size_t n = cm.total();
  if (n == 0) throw InvalidInput("metrics: confusion matrix is empty");
  MetricsReport r;
  r.n = n;
  r.tpr = ratio(cm.tp, cm.tp + cm.fn);
  r.fpr = ratio(cm.fp, cm.fp + cm.tn);
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
  r.error_rate = static_cast<double>(cm.fp + cm.fn) / static_cast<double>(n);
  return r;
}

std::string format_report(const ConfusionMatrix& cm, const MetricsReport& report) {
  std::ostringstream out;
  out << "tp=" << cm.tp << '\n'
      << "tn=" << cm.tn << '\n'
      << "fp=" << cm.fp << '\n'
      << "fn=" << cm.fn << '\n'
      << "n=" << report.n << '\n'
      << "tpr=" << render(report.tpr) << '\n'
      << "fpr=" << render(report.fpr) << '\n'
      << "precision=" << render(report.precision) << '\n'
      << "accuracy=" << format_real(report.accuracy) << '\n'
      << "error_rate=" << format_real(report.error_rate) << '\n';
  return out.str();
}

std::string report_json(const ConfusionMatrix& cm, const MetricsReport& report) {
  nlohmann::json j;
  j["tp"] = cm.tp;
  j["tn"] = cm.tn;
  j["fp"] = cm.fp;
  j["fn"] = cm.fn;
  j["n"] = report.n;
  j["tpr"] = to_json(report.tpr);
  j["fpr"] = to_json(report.fpr);
  j["precision"] = to_json(report.precision);
  j["accuracy"] = report.accuracy;
  j["error_rate"] = report.error_rate;
  return j.dump(2);
}

RocCurve roc(std::span<const double> scores, std::span<const ClassLabel> actual) {
  if (scores.size() != actual.size()) throw InvalidInput("roc: scores and labels differ in length");
  if (scores.empty()) throw InvalidInput("roc: no samples");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InvalidInput("roc: score " + std::to_string(i) + " is not finite");
    if (actual[i] == ClassLabel::fire) ++positives;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw InvalidInput("roc: both classes are required (TPR or FPR would be undefined)");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  const auto pos_d = static_cast<double>(positives);
  const auto neg_d = static_cast<double>(negatives);
  for (std::size_t k = 0; k < order.size();) {
    // Lowering the threshold to this score admits every sample that ties it.
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      if (actual[order[k]] == ClassLabel::fire) {
        ++tp;
      } else {
        ++fp;
      }
      ++k;
    }
    const RocPoint p{static_cast<double>(fp) / neg_d, static_cast<double>(tp) / pos_d};
    if (!(p == curve.points.back())) curve.points.push_back(p);
  }
  if (!(curve.points.back() == RocPoint{1.0, 1.0})) curve.points.push_back({1.0, 1.0});

  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  curve.auc = std::clamp(area, 0.0, 1.0);
  return curve;
}

std::string roc_json(const RocCurve& curve) {
  nlohmann::json j;
  j["auc"] = curve.auc;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : curve.points) pts.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}});
  return j.dump(2);
}

}  // namespace firewatch
