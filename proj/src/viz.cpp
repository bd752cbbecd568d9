#include "firewatch/viz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "firewatch/error.hpp"
#include "firewatch/numeric.hpp"

namespace firewatch {

std::vector<std::pair<double, double>> lag_plot_data(std::span<const double> series, std::size_t lag) {
  if (lag == 0) throw InvalidInput("lag must be positive");
  if (lag >= series.size()) {
    throw InvalidInput("lag " + std::to_string(lag) + " needs a series longer than " +
                       std::to_string(series.size()));
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(series.size() - lag);
  for (std::size_t t = 0; t + lag < series.size(); ++t) out.emplace_back(series[t], series[t + lag]);
  return out;
}

CorrelationMatrix correlation_matrix(const Dataset& d) {
  if (d.size() < 2) throw InvalidInput("correlation needs at least two rows");
  const std::size_t n = d.size();
  std::array<std::vector<double>, 4> cols;
  for (std::size_t c = 0; c < 3; ++c) cols[c] = d.column(c);
  cols[3].reserve(n);
  for (const auto& r : d.rows) cols[3].push_back(static_cast<double>(to_int(r.label)));

  // Two-pass: centre first, then accumulate cross products.
  std::array<std::vector<double>, 4> centred;
  std::array<double, 4> ss{};
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0;
    for (double v : cols[c]) mean += v;
    mean /= static_cast<double>(n);
    centred[c].reserve(n);
    for (double v : cols[c]) centred[c].push_back(v - mean);
    for (double v : centred[c]) ss[c] += v * v;
  }

  CorrelationMatrix m{};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a; b < 4; ++b) {
      if (ss[a] == 0.0 || ss[b] == 0.0) continue;
      double r = 1.0;
      if (a != b) {
        double cross = 0.0;
        for (std::size_t i = 0; i < n; ++i) cross += centred[a][i] * centred[b][i];
        r = std::clamp(cross / std::sqrt(ss[a] * ss[b]), -1.0, 1.0);
      }
      m[a][b] = r;
      m[b][a] = r;
    }
  }
  return m;
}

std::vector<AndrewsCurve> andrews_curves(const Dataset& d, std::size_t resolution) {
  if (d.empty()) throw InvalidInput("andrews curves need at least one row");
  if (resolution < 2) throw InvalidInput("andrews resolution must be at least 2");
  constexpr double pi = std::numbers::pi;
  std::vector<double> ts(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    ts[k] = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(resolution - 1);
  }

  std::vector<AndrewsCurve> curves;
  curves.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& x = d.rows[i].features;
    AndrewsCurve c{i, d.rows[i].label, ts, {}};
    c.value.reserve(resolution);
    for (double t : ts) c.value.push_back(x[0] / std::numbers::sqrt2 + x[1] * std::sin(t) + x[2] * std::cos(t));
    curves.push_back(std::move(c));
  }
  return curves;
}

std::string lag_csv(const std::vector<std::pair<double, double>>& pairs) {
  std::ostringstream out;
  out << "x_t,x_t_plus_lag\n";
  for (const auto& [a, b] : pairs) out << format_real(a) << ',' << format_real(b) << '\n';
  return out.str();
}

std::string correlation_json(const CorrelationMatrix& m) {
  nlohmann::json j;
  j["labels"] = kCorrelationLabels;
  auto& rows = j["matrix"] = nlohmann::json::array();
  for (const auto& row : m) {
    auto r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
    rows.push_back(std::move(r));
  }
  return j.dump(2);
}

std::string andrews_csv(const std::vector<AndrewsCurve>& curves) {
  std::ostringstream out;
  out << "row,label,t,f\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.t.size(); ++k) {
      out << c.row << ',' << to_int(c.label) << ',' << format_real(c.t[k]) << ','
          << format_real(c.value[k]) << '\n';
    }
  }
  return out.str();
}

}  // namespace firewatch
