#pragma once

#include <complex>
#include <vector>

#include "uwajam/numerics.hpp"

namespace uwajam::uwchannel {

/// Acoustic environment of one water column.
struct EnvironmentConfig {
  double frequency_khz = 22.0;
  double bandwidth_hz = 10e3;
  double spreading_factor = 1.5;
  double noise_level_db = 50.0;  ///< N1 of the ambient-noise PSD, dB re uPa^2/Hz
  double noise_decay = 1.8;      ///< tau_noise: PSD falls by 10 tau_noise dB per decade of f
  /// Source level of one watt, dB re uPa at 1 m. Maps transmit powers in watts
  /// onto the noise PSD scale; 0 keeps both on the same raw scale.
  double source_level_db = 170.8;
  double depth_km = 0.1;
  double dmax_km = 10.000499987500625;

  /// Throws DomainError naming the offending field.
  void validate() const;
};

struct Tap {
  double delay_s = 0.0;
  double mean_gain = 1.0;
};

/// Multipath tap set with unit per-path variance.
struct TapProfile {
  std::vector<Tap> taps;
  double per_path_sigma = 1.0;

  void validate() const;

  /// Five taps, gains 1, 1/2, ..., 1/16 at delays 0..4 ms.
  static TapProfile default_profile();
};

/// Non-centrality of the two-degree-of-freedom chi-squared |H|^2.
struct FadingParams {
  double psi = 0.0;

  void validate() const;
};

/// Thorp absorption in dB/km, f in kHz.
double absorption_db_per_km(double f_khz);

/// Spreading plus absorption loss in dB. Reference distance 1 m.
double pathloss_db(const EnvironmentConfig& env, double d_m);

/// Path loss as a linear power ratio.
double pathloss_linear(const EnvironmentConfig& env, double d_m);

/// Ambient noise PSD at the carrier in dB (before the source-level offset).
double noise_psd_db(const EnvironmentConfig& env);

/// sigma^2 = bandwidth * N(f), expressed on the transmit-power scale.
double noise_power(const EnvironmentConfig& env);

FadingParams psi_from_taps(const TapProfile& taps, double f_khz);

/// (Z1 + sqrt(psi))^2 + Z2^2.
double sample_fading(const FadingParams& params, numerics::RandomStream& rng);

/// P[|H|^2 <= x] = 1 - Q1(sqrt(psi), sqrt(x)).
double fading_cdf(double x, const FadingParams& params);

/// E[exp(-s kappa |H|^2)] = exp(-psi kappa s / (1 + 2 kappa s)) / (1 + 2 kappa s).
std::complex<double> lt_fading(std::complex<double> s, const FadingParams& params,
                               double kappa = 1.0);

/// 1 - lt_fading(s, params, kappa), accurate when kappa s is tiny.
std::complex<double> one_minus_lt_fading(std::complex<double> s, const FadingParams& params,
                                         double kappa = 1.0);

/// Real-argument fast path of one_minus_lt_fading.
double one_minus_lt_fading_real(double x, double psi);

}  // namespace uwajam::uwchannel
