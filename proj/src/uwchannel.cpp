#include "uwajam/uwchannel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace uwajam::uwchannel {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw DomainError(field + ": " + what);
}

}  // namespace

void EnvironmentConfig::validate() const {
  require(std::isfinite(frequency_khz) && frequency_khz > 0, "frequency_khz", "must be > 0");
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
  require(spreading_factor >= 1.0 && spreading_factor <= 2.0, "spreading_factor",
          "must lie in [1, 2]");
  require(std::isfinite(noise_level_db), "noise_level_db", "must be finite");
  require(std::isfinite(noise_decay), "noise_decay", "must be finite");
  require(std::isfinite(source_level_db), "source_level_db", "must be finite");
  require(std::isfinite(depth_km) && depth_km > 0, "depth_km", "must be > 0");
  require(std::isfinite(dmax_km) && dmax_km >= depth_km, "dmax_km", "must be >= depth_km");
}

void TapProfile::validate() const {
  require(!taps.empty(), "taps", "at least one tap is required");
  for (const auto& t : taps) {
    require(std::isfinite(t.delay_s) && t.delay_s >= 0, "taps.delay", "must be >= 0");
    require(std::isfinite(t.mean_gain), "taps.mean_gain", "must be finite");
  }
  require(per_path_sigma == 1.0, "per_path_sigma", "only unit per-path variance is modelled");
}

TapProfile TapProfile::default_profile() {
  TapProfile p;
  double gain = 1.0;
  for (int l = 0; l < 5; ++l) {
    p.taps.push_back({l * 1e-3, gain});
    gain *= 0.5;
  }
  return p;
}

void FadingParams::validate() const {
  require(std::isfinite(psi) && psi >= 0, "psi", "must be finite and >= 0");
}

double absorption_db_per_km(double f_khz) {
  if (!std::isfinite(f_khz) || f_khz <= 0) {
    throw DomainError("absorption_db_per_km: frequency must be finite and > 0");
  }
  const double f2 = f_khz * f_khz;
  return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double pathloss_db(const EnvironmentConfig& env, double d_m) {
  if (!(d_m >= 1.0)) {
    throw DomainError("pathloss_db: distance below the 1 m reference");
  }
  return env.spreading_factor * 10.0 * std::log10(d_m) +
         (d_m / 1000.0) * absorption_db_per_km(env.frequency_khz);
}

double pathloss_linear(const EnvironmentConfig& env, double d_m) {
  return std::pow(10.0, pathloss_db(env, d_m) / 10.0);
}

double noise_psd_db(const EnvironmentConfig& env) {
  return env.noise_level_db - env.noise_decay * 10.0 * std::log10(env.frequency_khz);
}

double noise_power(const EnvironmentConfig& env) {
  return env.bandwidth_hz * std::pow(10.0, (noise_psd_db(env) - env.source_level_db) / 10.0);
}

FadingParams psi_from_taps(const TapProfile& taps, double f_khz) {
  taps.validate();
  const double f_hz = 1000.0 * f_khz;
  std::complex<double> sum{};
  for (const auto& t : taps.taps) {
    // Reduce the phase modulo one cycle before scaling by 2 pi.
    const double cycles = f_hz * t.delay_s;
    const double frac = cycles - std::floor(cycles);
    sum += std::polar(t.mean_gain, -2.0 * std::numbers::pi * frac);
  }
  const double l = static_cast<double>(taps.taps.size());
  return {2.0 / l * std::norm(sum)};
}

double sample_fading(const FadingParams& params, numerics::RandomStream& rng) {
  const double z1 = rng.normal() + std::sqrt(params.psi);
  const double z2 = rng.normal();
  return z1 * z1 + z2 * z2;
}

double fading_cdf(double x, const FadingParams& params) {
  if (!(x >= 0)) throw DomainError("fading_cdf: threshold must be >= 0");
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double a = std::sqrt(params.psi);
  const double b = std::sqrt(x);
  return 1.0 - numerics::marcum_q1(a, b);
}

std::complex<double> lt_fading(std::complex<double> s, const FadingParams& params,
                               double kappa) {
  const std::complex<double> x = kappa * s;
  const std::complex<double> den = 1.0 + 2.0 * x;
  if (!(den.real() > 0)) {
    throw DomainError("lt_fading: argument outside the region Re(1 + 2 kappa s) > 0");
  }
  return std::exp(-params.psi * x / den) / den;
}

std::complex<double> one_minus_lt_fading(std::complex<double> s, const FadingParams& params,
                                         double kappa) {
  const std::complex<double> x = kappa * s;
  const std::complex<double> den = 1.0 + 2.0 * x;
  if (!(den.real() > 0)) {
    throw DomainError("lt_fading: argument outside the region Re(1 + 2 kappa s) > 0");
  }
  // 1 - e^a / den = (2x - expm1(a)) / den
  const std::complex<double> a = -params.psi * x / den;
  return (2.0 * x - numerics::expm1(a)) / den;
}

double one_minus_lt_fading_real(double x, double psi) {
  const double den = 1.0 + 2.0 * x;
  return (2.0 * x - std::expm1(-psi * x / den)) / den;
}

}  // namespace uwajam::uwchannel
