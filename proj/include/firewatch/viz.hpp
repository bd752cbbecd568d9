#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "firewatch/dataset.hpp"

namespace firewatch {

/// (x_t, x_{t+lag}) for t = 0 .. n-lag-1.
std::vector<std::pair<double, double>> lag_plot_data(std::span<const double> series, std::size_t lag);

/// Pearson correlation over Temp, Smoke, Flame and Label (as 0/1), in that
/// order. Entries involving a zero-variance column are undefined.
using CorrelationMatrix = std::array<std::array<std::optional<double>, 4>, 4>;
CorrelationMatrix correlation_matrix(const Dataset& d);

inline constexpr std::array<const char*, 4> kCorrelationLabels = {"Temp", "Smoke", "Flame", "Label"};

struct AndrewsCurve {
  std::size_t row;
  ClassLabel label;
  std::vector<double> t;
  std::vector<double> value;
};

/// f(t) = x1 / sqrt(2) + x2 sin t + x3 cos t on raw features, sampled at
/// `resolution` evenly spaced points over [-pi, pi].
std::vector<AndrewsCurve> andrews_curves(const Dataset& d, std::size_t resolution);

// Plot-ready emissions.
std::string lag_csv(const std::vector<std::pair<double, double>>& pairs);
std::string correlation_json(const CorrelationMatrix& m);
std::string andrews_csv(const std::vector<AndrewsCurve>& curves);

}  // namespace firewatch
