#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "uwajam/errors.hpp"

namespace uwajam::numerics {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Change of variable used when the upper limit is +inf.
enum class Transform {
  none,          ///< semi-infinite ranges rejected
  log_compress,  ///< x = a - ln(1 - y); suited to exponentially decaying integrands
  rational,      ///< x = a + y / (1 - y); suited to algebraic decay
};

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  std::size_t max_evals = 200000;
  Transform transform = Transform::log_compress;

  void validate() const;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
};

using RealIntegrand = std::function<double(double)>;
using ComplexIntegrand = std::function<Complex(double)>;

/// Globally adaptive Gauss-Kronrod (21-point) quadrature over [a, b]; b may be +inf.
/// Throws NumericalError when the evaluation budget runs out and when the
/// integrand returns NaN or Inf.
QuadResult<double> integrate_real(const RealIntegrand& f, double a, double b,
                                  const QuadratureSpec& spec = {});
QuadResult<Complex> integrate_complex(const ComplexIntegrand& f, double a, double b,
                                      const QuadratureSpec& spec = {});

/// Same, over the finite partition points[0] < points[1] < ... < points[n-1].
QuadResult<double> integrate_real(const RealIntegrand& f, std::span<const double> points,
                                  const QuadratureSpec& spec = {});
QuadResult<Complex> integrate_complex(const ComplexIntegrand& f,
                                      std::span<const double> points,
                                      const QuadratureSpec& spec = {});

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (std::is_same_v<R, Complex>) {
    return integrate_complex(ComplexIntegrand(std::forward<F>(f)), a, b, spec);
  } else {
    return integrate_real(RealIntegrand(std::forward<F>(f)), a, b, spec);
  }
}

template <class F>
auto integrate(F&& f, std::span<const double> points, const QuadratureSpec& spec = {}) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (std::is_same_v<R, Complex>) {
    return integrate_complex(ComplexIntegrand(std::forward<F>(f)), points, spec);
  } else {
    return integrate_real(RealIntegrand(std::forward<F>(f)), points, spec);
  }
}

/// Wynn epsilon extrapolation of a sequence of partial sums; returns the
/// latest diagonal estimate.
double wynn_epsilon(std::span<const double> partial_sums);

using CharacteristicFunction = std::function<Complex(double)>;

struct GilPelaezOptions {
  /// Characteristic scale of t where the CF varies (1/typical |X|).
  double scale = 1.0;
  /// E[X], used for the t -> 0 limit of the integrand. Estimated from the CF when absent.
  std::optional<double> mean;
};

struct TailProbability {
  double probability = 0.0;  ///< clamped to [0, 1]
  double raw = 0.0;          ///< before clamping
  double error = 0.0;        ///< absolute error estimate of raw
  std::size_t evals = 0;
  std::string warning;       ///< set when raw leaves [0, 1] by more than 10 rel_tol
};

/// P[X > u] = 1/2 + (1/pi) int_0^inf Im[e^{-itu} phi(t)] / t dt.
TailProbability gil_pelaez_tail_detailed(const CharacteristicFunction& cf, double u,
                                         const QuadratureSpec& spec = {},
                                         const GilPelaezOptions& options = {});

double gil_pelaez_tail(const CharacteristicFunction& cf, double u,
                       const QuadratureSpec& spec = {}, const GilPelaezOptions& options = {});

/// Marcum Q function of order one, Q1(a, b) = P[(Z1 + a)^2 + Z2^2 > b^2].
/// Valid for 0 <= a <= 50; b - a > 40 returns 0 (below double range).
double marcum_q1(double a, double b);

/// e^z - 1 without cancellation for small |z|.
Complex expm1(Complex z);

// ---------------------------------------------------------------------------
// Random streams

/// Deterministic 64-bit generator keyed by (seed, stream_id).
///
/// xoshiro256** core, state initialised from the key through SplitMix64.
/// Satisfies UniformRandomBitGenerator so <random> distributions accept it.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal draw.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];
  std::normal_distribution<double> normal_;
};

/// Child stream `index` of `parent`. Distinct indices under one parent give
/// distinct stream ids.
RandomStream split_stream(const RandomStream& parent, std::uint64_t index);

std::uint64_t sample_poisson(double mean, RandomStream& rng);
double sample_normal(RandomStream& rng);

}  // namespace uwajam::numerics
