#include "uwajam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace uwajam::numerics {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_evals < 100) {
    throw DomainError("quadrature budget must allow at least 100 evaluations");
  }
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class T>
struct Interval {
  double a;
  double b;
  T value;
  double error;
};

template <class T>
bool less_error(const Interval<T>& x, const Interval<T>& y) {
  return x.error < y.error;
}

template <class T>
void check_finite(const T& v, double x) {
  bool ok;
  if constexpr (std::is_same_v<T, Complex>) {
    ok = std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    ok = std::isfinite(v);
  }
  if (!ok) {
    std::ostringstream os;
    os << "integrand returned a non-finite value at x = " << x;
    throw NumericalError(os.str(), std::nan(""), std::nan(""), 0);
  }
}

// 21-point Kronrod rule with the embedded 10-point Gauss rule; QUADPACK error scaling.
template <class T, class F>
Interval<T> gk21(F& f, double a, double b) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  T fv[21];
  fv[0] = f(c);
  check_finite(fv[0], c);
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const double dx = h * xk[j];
    fv[2 * j - 1] = f(c - dx);
    check_finite(fv[2 * j - 1], c - dx);
    fv[2 * j] = f(c + dx);
    check_finite(fv[2 * j], c + dx);
  }

  T resk = wk[0] * fv[0];
  T resg{};
  double resabs = wk[0] * std::abs(fv[0]);
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const T pair = fv[2 * j - 1] + fv[2 * j];
    resk += wk[j] * pair;
    resabs += wk[j] * (std::abs(fv[2 * j - 1]) + std::abs(fv[2 * j]));
    if (j % 2 == 1) resg += wg[(j - 1) / 2] * pair;
  }
  const T reskh = resk * 0.5;
  double resasc = wk[0] * std::abs(fv[0] - reskh);
  for (std::size_t j = 1; j < xk.size(); ++j) {
    resasc += wk[j] * (std::abs(fv[2 * j - 1] - reskh) + std::abs(fv[2 * j] - reskh));
  }
  const double ah = std::abs(h);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, resk * h, err};
}

template <class T>
QuadResult<T> adaptive(const std::function<T(double)>& f, std::vector<double> points,
                       const QuadratureSpec& spec) {
  spec.validate();
  std::vector<Interval<T>> heap;
  std::vector<Interval<T>> frozen;
  std::size_t evals = 0;
  T total{};
  double total_err = 0.0;

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] == points[i]) continue;
    auto iv = gk21<T>(f, points[i], points[i + 1]);
    evals += 21;
    total += iv.value;
    total_err += iv.error;
    heap.push_back(iv);
  }
  std::make_heap(heap.begin(), heap.end(), less_error<T>);

  auto tolerance = [&] { return std::max(spec.rel_tol * std::abs(total), spec.abs_tol); };

  std::size_t iter = 0;
  while (total_err > tolerance()) {
    if (heap.empty()) {
      throw NumericalError("quadrature cannot reach tolerance: round-off limited",
                           std::abs(total), total_err, evals);
    }
    if (evals + 42 > spec.max_evals) {
      std::ostringstream os;
      os << "quadrature budget of " << spec.max_evals << " evaluations exhausted (error "
         << total_err << " vs tolerance " << tolerance() << ")";
      throw NumericalError(os.str(), std::abs(total), total_err, evals);
    }
    std::pop_heap(heap.begin(), heap.end(), less_error<T>);
    Interval<T> worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) <= 1e3 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    auto left = gk21<T>(f, worst.a, mid);
    auto right = gk21<T>(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less_error<T>);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less_error<T>);

    // Running sums drift; resum periodically.
    if (++iter % 64 == 0) {
      total = T{};
      total_err = 0.0;
      for (const auto& iv : heap) { total += iv.value; total_err += iv.error; }
      for (const auto& iv : frozen) { total += iv.value; total_err += iv.error; }
    }
  }

  // Sum from smallest to largest interval start for a stable final value.
  std::vector<Interval<T>> all = std::move(heap);
  all.insert(all.end(), frozen.begin(), frozen.end());
  std::sort(all.begin(), all.end(),
            [](const Interval<T>& x, const Interval<T>& y) { return x.a < y.a; });
  QuadResult<T> out;
  for (const auto& iv : all) {
    out.value += iv.value;
    out.error += iv.error;
  }
  out.evals = evals;
  return out;
}

template <class T>
QuadResult<T> integrate_any(const std::function<T(double)>& f, double a, double b,
                            const QuadratureSpec& spec) {
  if (std::isnan(a) || std::isnan(b) || std::isinf(a)) {
    throw DomainError("integration limits must be finite except for an upper +inf");
  }
  if (b == a) return {};
  if (std::isfinite(b)) {
    if (b < a) {
      auto r = adaptive<T>(f, {b, a}, spec);
      r.value = -r.value;
      return r;
    }
    return adaptive<T>(f, {a, b}, spec);
  }
  if (spec.transform == Transform::none) {
    throw DomainError("semi-infinite range requires a transform");
  }
  // Doubling panels [a + 2^k - 1, a + 2^{k+1} - 1] in x until one is negligible,
  // then the remainder through the change of variable.
  QuadResult<T> out;
  QuadratureSpec panel = spec;
  panel.abs_tol = 0.125 * spec.abs_tol;
  double lo = a;
  double width = 1.0;
  int quiet = 0;
  for (int k = 0; k < 64 && quiet < 2; ++k) {
    panel.max_evals = std::max<std::size_t>(100, spec.max_evals - std::min(out.evals, spec.max_evals - 100));
    auto r = adaptive<T>(f, {lo, lo + width}, panel);
    out.value += r.value;
    out.error += r.error;
    out.evals += r.evals;
    if (out.evals >= spec.max_evals) {
      throw NumericalError("integration budget exhausted on a semi-infinite range",
                           std::abs(out.value), out.error, out.evals);
    }
    const double small = 1e-3 * std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    quiet = (std::abs(r.value) + r.error <= small) ? quiet + 1 : 0;
    lo += width;
    width *= 2.0;
  }
  std::function<T(double)> g;
  if (spec.transform == Transform::log_compress) {
    g = [&f, lo](double y) {
      const double om = 1.0 - y;
      return f(lo - std::log(om)) * (1.0 / om);
    };
  } else {
    g = [&f, lo](double y) {
      const double om = 1.0 - y;
      return f(lo + y / om) * (1.0 / (om * om));
    };
  }
  panel.max_evals = std::max<std::size_t>(100, spec.max_evals - out.evals);
  auto tail = adaptive<T>(g, {0.0, 1.0}, panel);
  out.value += tail.value;
  out.error += tail.error;
  out.evals += tail.evals;
  return out;
}

template <class T>
QuadResult<T> integrate_points(const std::function<T(double)>& f,
                               std::span<const double> points, const QuadratureSpec& spec) {
  if (points.size() < 2) throw DomainError("partition needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw DomainError("partition points must be finite");
    if (i > 0 && !(points[i] >= points[i - 1])) {
      throw DomainError("partition points must be nondecreasing");
    }
  }
  return adaptive<T>(f, std::vector<double>(points.begin(), points.end()), spec);
}

}  // namespace

QuadResult<double> integrate_real(const RealIntegrand& f, double a, double b,
                                  const QuadratureSpec& spec) {
  return integrate_any<double>(f, a, b, spec);
}

QuadResult<Complex> integrate_complex(const ComplexIntegrand& f, double a, double b,
                                      const QuadratureSpec& spec) {
  return integrate_any<Complex>(f, a, b, spec);
}

QuadResult<double> integrate_real(const RealIntegrand& f, std::span<const double> points,
                                  const QuadratureSpec& spec) {
  return integrate_points<double>(f, points, spec);
}

QuadResult<Complex> integrate_complex(const ComplexIntegrand& f,
                                      std::span<const double> points,
                                      const QuadratureSpec& spec) {
  return integrate_points<Complex>(f, points, spec);
}

double wynn_epsilon(std::span<const double> s) {
  if (s.empty()) return 0.0;
  const std::size_t n = s.size();
  // Column k of the epsilon table, indexed by sequence position; even columns
  // carry the extrapolated limits.
  std::vector<double> prev(s.begin(), s.end());
  std::vector<double> prev2(n + 1, 0.0);
  double best = s.back();
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<double> cur(n - col);
    for (std::size_t i = 0; i < n - col; ++i) {
      const double diff = prev[i + 1] - prev[i];
      if (diff == 0.0) return (col % 2 == 1) ? prev[i + 1] : best;
      cur[i] = prev2[i + 1] + 1.0 / diff;
      if (!std::isfinite(cur[i])) return best;
    }
    if (col % 2 == 0) best = cur.back();
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Gil-Pelaez inversion

TailProbability gil_pelaez_tail_detailed(const CharacteristicFunction& cf, double u,
                                         const QuadratureSpec& spec,
                                         const GilPelaezOptions& options) {
  spec.validate();
  if (!std::isfinite(u)) throw DomainError("Gil-Pelaez threshold must be finite");
  const double scale = options.scale;
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("Gil-Pelaez scale must be positive");
  }

  auto g = [&cf, u](double t) {
    const Complex rot(std::cos(t * u), -std::sin(t * u));
    return (rot * cf(t)).imag() / t;
  };

  TailProbability out;

  // Near t = 0 the integrand tends to E[X] - u; integrate that constant on [0, t_lo].
  double limit;
  double t_lo;
  if (options.mean) {
    limit = *options.mean - u;
    t_lo = 1e-6 * scale;
    const double cap = 1e-3 * spec.abs_tol / std::max(std::abs(limit), 1e-300);
    t_lo = std::min(t_lo, cap);
  } else {
    t_lo = 1e-9 * scale;
    limit = g(t_lo);
    out.evals += 1;
  }
  const double patch = limit * t_lo;

  const double period = (u != 0.0) ? std::numbers::pi / std::abs(u) : kInf;
  const double smooth_end = std::max(1e3 * scale, 10.0 * t_lo);

  // Logarithmic partition from t_lo up to the first half period of e^{-itu}
  // (or to 1e3 scale when there is no oscillation to worry about).
  const double switch_at = std::max(period, t_lo * 10.0);
  const double decade_end = (u == 0.0) ? smooth_end : switch_at;
  std::vector<double> edges{t_lo};
  while (edges.back() < decade_end) {
    edges.push_back(std::min(edges.back() * 10.0, decade_end));
  }

  QuadratureSpec inner = spec;
  auto body = integrate_real(g, std::span<const double>(edges), inner);
  out.evals += body.evals;
  double integral = patch + body.value;
  double err = body.error;

  if (u == 0.0) {
    QuadratureSpec tail_spec = spec;
    tail_spec.transform = Transform::rational;
    tail_spec.max_evals = spec.max_evals > out.evals ? spec.max_evals - out.evals : 100;
    auto tail = integrate_real(g, edges.back(), kInf, tail_spec);
    out.evals += tail.evals;
    integral += tail.value;
    err += tail.error;
  } else {
    // Half-period panels of e^{-itu}; accelerate the alternating partial sums.
    QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = 0.1 * spec.abs_tol;
    std::vector<double> partial;
    double sum = 0.0;
    double panel_err = 0.0;
    int quiet = 0;
    double prev_est = kInf;
    int stable = 0;
    double start = edges.back();
    double tail_value = std::nan("");
    for (std::size_t k = 0; k < 20000; ++k) {
      const double a = start + static_cast<double>(k) * period;
      const double b = a + period;
      if (out.evals + 42 > spec.max_evals) break;
      panel_spec.max_evals = std::max<std::size_t>(100, spec.max_evals - out.evals);
      auto p = integrate_real(g, a, b, panel_spec);
      out.evals += p.evals;
      sum += p.value;
      panel_err += p.error;
      partial.push_back(sum);

      quiet = (std::abs(p.value) <= 1e-2 * spec.abs_tol) ? quiet + 1 : 0;
      if (quiet >= 3 && a > scale) {
        tail_value = sum;
        break;
      }
      if (partial.size() >= 6) {
        const std::size_t window = std::min<std::size_t>(partial.size(), 40);
        const double est = wynn_epsilon(
            std::span<const double>(partial).subspan(partial.size() - window));
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));
        stable = (std::abs(est - prev_est) <= tol) ? stable + 1 : 0;
        prev_est = est;
        if (stable >= 2) {
          tail_value = est;
          err += tol;
          break;
        }
      }
    }
    if (std::isnan(tail_value)) {
      throw NumericalError("Gil-Pelaez oscillatory tail did not converge within budget",
                           0.5 + (integral + sum) / std::numbers::pi, err + panel_err,
                           out.evals);
    }
    integral += tail_value;
    err += panel_err;
  }

  out.raw = 0.5 + integral / std::numbers::pi;
  out.error = err / std::numbers::pi;
  out.probability = std::clamp(out.raw, 0.0, 1.0);
  const double slack = 10.0 * spec.rel_tol;
  if (out.raw < -slack || out.raw > 1.0 + slack) {
    std::ostringstream os;
    os << "inverted probability " << out.raw << " outside [0, 1] beyond tolerance";
    out.warning = os.str();
  }
  return out;
}

double gil_pelaez_tail(const CharacteristicFunction& cf, double u, const QuadratureSpec& spec,
                       const GilPelaezOptions& options) {
  return gil_pelaez_tail_detailed(cf, u, spec, options).probability;
}

// ---------------------------------------------------------------------------
// Marcum Q

namespace {

double log_add(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw DomainError("marcum_q1 requires finite a, b >= 0");
  }
  if (a > 50.0) throw DomainError("marcum_q1: a > 50 is outside the supported range");
  if (b == 0.0) return 1.0;
  if (b - a > 40.0) return 0.0;

  // Q1(a, b) = P[M <= K] with K ~ Poisson(a^2/2), M ~ Poisson(b^2/2) independent.
  const double mu = 0.5 * a * a;
  const double y = 0.5 * b * b;
  if (mu == 0.0) return std::exp(-y);

  const double log_mu = std::log(mu);
  const double log_y = std::log(y);
  const double k_peak = std::max(mu, std::sqrt(mu * y)) + 1.0;
  double log_cdf = -kInf;  // log P[M <= k]
  double log_sum = -kInf;
  for (int k = 0; k < 100000; ++k) {
    const double lgk = std::lgamma(k + 1.0);
    log_cdf = log_add(log_cdf, -y + k * log_y - lgk);
    const double log_term = -mu + k * log_mu - lgk + log_cdf;
    log_sum = log_add(log_sum, log_term);
    if (k > k_peak && log_term < log_sum - 42.0) break;
  }
  return std::clamp(std::exp(log_sum), 0.0, 1.0);
}

Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

// ---------------------------------------------------------------------------

std::uint64_t sample_poisson(double mean, RandomStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("Poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

double sample_normal(RandomStream& rng) { return rng.normal(); }

}  // namespace uwajam::numerics
