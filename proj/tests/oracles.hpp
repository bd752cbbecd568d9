#pragma once

// Brute-force reference computations used only by tests. Nothing here calls
// into the library's kernel, solver, ROC or correlation code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace firewatch::oracle {

using Point = std::array<double, 3>;

inline double kernel(const Point& a, const Point& b, double gamma) {
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) s += std::pow(a[k] - b[k], 2);
  return std::exp(-gamma * s);
}

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij, evaluated term by term.
inline double dual_value(const std::vector<double>& alpha, const std::vector<Point>& xs,
                         const std::vector<double>& ys, double gamma) {
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < xs.size(); ++j) {
      quad += alpha[i] * alpha[j] * ys[i] * ys[j] * kernel(xs[i], xs[j], gamma);
    }
  }
  return linear - 0.5 * quad;
}

namespace detail {

struct GridSearch {
  const std::vector<Point>& xs;
  const std::vector<double>& ys;
  double gamma;
  double c;
  std::vector<std::vector<double>> gram;
  double best = -HUGE_VAL;
  std::vector<double> best_alpha;

  GridSearch(const std::vector<Point>& x, const std::vector<double>& y, double g, double box)
      : xs(x), ys(y), gamma(g), c(box), gram(x.size(), std::vector<double>(x.size())) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) gram[i][j] = kernel(xs[i], xs[j], gamma);
  }

  double value(const std::vector<double>& a) const {
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      linear += a[i];
      for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * a[j] * ys[i] * ys[j] * gram[i][j];
    }
    return linear - 0.5 * quad;
  }

  // Enumerates alpha_0..alpha_{n-2} over per-coordinate grids; the last
  // coordinate is fixed by the equality constraint and must land in [0, C].
  void enumerate(const std::vector<double>& lo, const std::vector<double>& hi, int steps) {
    const std::size_t n = xs.size();
    const std::size_t free = n - 1;
    std::vector<int> idx(free, 0);
    std::vector<double> a(n, 0.0);
    while (true) {
      double s = 0.0;
      for (std::size_t k = 0; k < free; ++k) {
        a[k] = lo[k] + (hi[k] - lo[k]) * static_cast<double>(idx[k]) / steps;
        s += a[k] * ys[k];
      }
      const double last = -ys[n - 1] * s;
      if (last >= 0.0 && last <= c) {
        a[n - 1] = last;
        const double v = value(a);
        if (v > best) {
          best = v;
          best_alpha = a;
        }
      }
      std::size_t k = 0;
      while (k < free && ++idx[k] > steps) idx[k++] = 0;
      if (k == free) break;
    }
  }
};

}  // namespace detail

/// Best dual value over a uniform grid of the feasible region, refined by
/// repeatedly zooming the grid around the incumbent. Every evaluated point is
/// feasible, so the result never exceeds the true optimum.
inline double grid_dual_optimum(const std::vector<Point>& xs, const std::vector<double>& ys,
                                double gamma, double c, int steps, int zooms) {
  detail::GridSearch g(xs, ys, gamma, c);
  const std::size_t free = xs.size() - 1;
  std::vector<double> lo(free, 0.0);
  std::vector<double> hi(free, c);
  g.enumerate(lo, hi, steps);
  double width = c / steps;
  for (int z = 0; z < zooms && !g.best_alpha.empty(); ++z) {
    for (std::size_t k = 0; k < free; ++k) {
      lo[k] = std::max(0.0, g.best_alpha[k] - 2 * width);
      hi[k] = std::min(c, g.best_alpha[k] + 2 * width);
    }
    g.enumerate(lo, hi, 20);
    width = 4 * width / 20;
  }
  return g.best;
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counting 1/2.
inline double pair_counting_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        good += 1.0;
      } else if (scores[i] == scores[j]) {
        good += 0.5;
      }
    }
  }
  return good / pairs;
}

/// Textbook single-pass Pearson in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const auto n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double cov = n * sxy - sx * sy;
  const long double vx = n * sxx - sx * sx;
  const long double vy = n * syy - sy * sy;
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

}  // namespace firewatch::oracle
