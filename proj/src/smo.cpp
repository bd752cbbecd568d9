#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "firewatch/error.hpp"
#include "firewatch/svm.hpp"

namespace firewatch {

void TrainConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("C must be positive and finite");
  if (!(kkt_tolerance > 0.0) || !std::isfinite(kkt_tolerance)) {
    throw InvalidInput("kkt_tolerance must be positive and finite");
  }
  if (max_passes < 1) throw InvalidInput("max_passes must be at least 1");
}

std::string to_string(TrainStatus status) {
  switch (status) {
    case TrainStatus::converged: return "converged";
    case TrainStatus::not_converged: return "not_converged";
    case TrainStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

// Platt-style SMO. The decision function on training point i is
// f_i = grad_[i] + bias_, where grad_[i] = sum_j alpha_j y_j K_ij.
class SmoSolver {
 public:
  SmoSolver(const KernelMatrix& gram, std::span<const double> y, const TrainConfig& cfg)
      : gram_(gram),
        y_(y),
        c_(cfg.c),
        tol_(cfg.kkt_tolerance),
        // Sweeps use half the tolerance: re-centring the bias afterwards can
        // move each free residual by up to the spread of the bias estimates.
        sweep_tol_(cfg.kkt_tolerance / 2),
        max_passes_(cfg.max_passes),
        rng_(cfg.rng_seed),
        alpha_(y.size(), 0.0),
        grad_(y.size(), 0.0) {}

  DualSolution run() {
    const std::size_t n = y_.size();
    // Free-only sweeps between full passes are bounded so a numerically
    // stuck pair cannot spin forever.
    const std::size_t max_inner = 10 * n + 100;
    int passes = 0;
    bool done = false;
    while (passes < max_passes_ && !done) {
      int changed = 0;
      for (std::size_t i = 0; i < n; ++i) changed += examine(i) ? 1 : 0;
      ++passes;

      if (changed == 0) {
        refit_bias();
        if (max_violation() <= tol_) {
          done = true;
          break;
        }
        continue;
      }

      for (std::size_t inner = 0; inner < max_inner; ++inner) {
        int free_changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (is_free(i)) free_changed += examine(i) ? 1 : 0;
        }
        if (free_changed == 0) break;
      }
    }
    if (!done) refit_bias();

    DualSolution out;
    out.alphas = alpha_;
    out.bias = bias_;
    out.passes = passes;
    out.max_kkt_violation = max_violation();
    if (!done) {
      out.status = TrainStatus::not_converged;
    } else if (!bias_pinned_) {
      out.status = TrainStatus::degenerate;
    } else {
      out.status = TrainStatus::converged;
    }
    return out;
  }

 private:
  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }
  double error(std::size_t i) const { return grad_[i] + bias_ - y_[i]; }

  bool examine(std::size_t i2) {
    const double e2 = error(i2);
    const double r2 = e2 * y_[i2];
    const bool violates = (r2 < -sweep_tol_ && alpha_[i2] < c_) || (r2 > sweep_tol_ && alpha_[i2] > 0.0);
    if (!violates) return false;

    const std::size_t n = y_.size();

    // Second choice: maximal |E1 - E2| over free points, lowest index on ties.
    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i2 || !is_free(j)) continue;
      const double gap = std::abs(error(j) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best < n && take_step(best, i2)) return true;

    // Fall back to every free point, then every point, from a random start.
    const std::size_t start_free = rng_() % n;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = (start_free + k) % n;
      if (j != best && is_free(j) && take_step(j, i2)) return true;
    }
    const std::size_t start_all = rng_() % n;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = (start_all + k) % n;
      if (!is_free(j) && take_step(j, i2)) return true;
    }
    return false;
  }

  double snap(double a) const {
    const double eps = 1e-12 * c_;
    if (a < eps) return 0.0;
    if (a > c_ - eps) return c_;
    return a;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double e1 = error(i1);
    const double e2 = error(i2);
    const double s = y1 * y2;

    double lo = 0.0;
    double hi = 0.0;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (hi - lo <= 0.0) return false;

    const double k11 = gram_(i1, i1);
    const double k12 = gram_(i1, i2);
    const double k22 = gram_(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new = 0.0;
    if (eta > 0.0) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Flat or concave direction: take the better end of the segment.
      const double f1 = y1 * grad_[i1] - 1.0 - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * grad_[i2] - 1.0 - s * a1 * k12 - a2 * k22;
      auto objective_at = [&](double a2_end) {
        const double a1_end = a1 + s * (a2 - a2_end);
        return a1_end * f1 + a2_end * f2 + 0.5 * a1_end * a1_end * k11 +
               0.5 * a2_end * a2_end * k22 + s * a1_end * a2_end * k12;
      };
      const double obj_lo = objective_at(lo);
      const double obj_hi = objective_at(hi);
      constexpr double kFlat = 1e-12;
      if (obj_lo < obj_hi - kFlat) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + kFlat) {
        a2_new = hi;
      } else {
        a2_new = a2;
      }
    }
    a2_new = snap(a2_new);

    constexpr double kMinStep = 1e-12;
    if (std::abs(a2_new - a2) < kMinStep * (a2_new + a2 + kMinStep)) return false;

    const double a1_new = snap(a1 + s * (a2 - a2_new));
    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);

    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    if (a1_new > 0.0 && a1_new < c_) {
      bias_ = b1;
    } else if (a2_new > 0.0 && a2_new < c_) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }

    const std::size_t n = y_.size();
    for (std::size_t k = 0; k < n; ++k) grad_[k] += d1 * gram_(i1, k) + d2 * gram_(i2, k);
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    return true;
  }

  // Recomputes grad_ from scratch and sets the bias to the mean of the
  // per-point estimates over free support vectors. With none, the bias is
  // the midpoint of the interval allowed by the bound points.
  void refit_bias() {
    const std::size_t n = y_.size();
    for (std::size_t i = 0; i < n; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (alpha_[j] != 0.0) g += alpha_[j] * y_[j] * gram_(i, j);
      }
      grad_[i] = g;
    }

    double sum = 0.0;
    std::size_t free_count = 0;
    double lower = -HUGE_VAL;
    double upper = HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) {
      const double estimate = y_[i] - grad_[i];
      if (is_free(i)) {
        sum += estimate;
        ++free_count;
      } else if ((alpha_[i] == 0.0) == (y_[i] > 0)) {
        // alpha = 0, y = +1 or alpha = C, y = -1: y f >= 1 / y f <= 1 bound b below.
        lower = std::max(lower, estimate);
      } else {
        upper = std::min(upper, estimate);
      }
    }
    bias_pinned_ = free_count > 0;
    if (free_count > 0) {
      bias_ = sum / static_cast<double>(free_count);
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
      bias_ = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
      bias_ = lower;
    } else if (std::isfinite(upper)) {
      bias_ = upper;
    }
  }

  double max_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
      const double r = y_[i] * (grad_[i] + bias_) - 1.0;
      double v = 0.0;
      if (alpha_[i] == 0.0) {
        v = std::max(0.0, -r);
      } else if (alpha_[i] == c_) {
        v = std::max(0.0, r);
      } else {
        v = std::abs(r);
      }
      worst = std::max(worst, v);
    }
    return worst;
  }

  const KernelMatrix& gram_;
  std::span<const double> y_;
  double c_;
  double tol_;
  double sweep_tol_;
  int max_passes_;
  std::mt19937_64 rng_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  double bias_ = 0.0;
  bool bias_pinned_ = false;
};

}  // namespace

DualSolution solve_dual(const KernelMatrix& gram, std::span<const double> signed_labels,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (gram.size() != signed_labels.size() || gram.size() == 0) {
    throw InvalidInput("solve_dual: Gram matrix and label count disagree or are empty");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (double y : signed_labels) {
    if (y == 1.0) {
      has_pos = true;
    } else if (y == -1.0) {
      has_neg = true;
    } else {
      throw InvalidInput("solve_dual: signed labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw TrainingError("training data must contain both classes");
  return SmoSolver(gram, signed_labels, cfg).run();
}

}  // namespace firewatch
