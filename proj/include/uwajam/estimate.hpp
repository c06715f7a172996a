#pragma once

#include <cmath>
#include <cstdint>

namespace uwajam {

/// A metric value with estimator metadata.
struct MetricEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t n = 0;        ///< trial count; 0 for quadrature results
  double quad_error = 0.0;    ///< quadrature error estimate; 0 for sampled results

  static MetricEstimate exact(double v, double quad_error = 0.0) {
    return {v, 0.0, v, v, 0, quad_error};
  }
};

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error_of_mean() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Normal-approximation interval around a sample mean.
inline MetricEstimate mean_estimate(const RunningStats& s) {
  const double se = s.std_error_of_mean();
  return {s.mean, se, s.mean - kZ95 * se, s.mean + kZ95 * se, s.n, 0.0};
}

/// Wald interval for a proportion, clamped to [0, 1].
inline MetricEstimate proportion_estimate(std::uint64_t hits, std::uint64_t n) {
  const double p = n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
  const double se = n ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
  return {p, se, std::fmax(0.0, p - kZ95 * se), std::fmin(1.0, p + kZ95 * se), n, 0.0};
}

/// Combined standard error of a difference of two independent estimates.
inline double combined_stderr(const MetricEstimate& a, const MetricEstimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

}  // namespace uwajam
