#pragma once

#include <complex>
#include <span>
#include <vector>

#include "uwajam/numerics.hpp"
#include "uwajam/uwchannel.hpp"

namespace uwajam::stochgeom {

/// Homogeneous PPP of seabed jammers around the receiver's seabed projection.
struct JammerField {
  double intensity_per_km2 = 0.01;
  double jam_power = 20.0;
  double depth_km = 0.1;
  double trunc_radius_km = 20.0;
  uwchannel::FadingParams jammer_fading{};

  void validate() const;
};

struct JammerRealization {
  std::vector<double> radii_km;  ///< horizontal distances, each in (0, R_trunc]
};

JammerRealization sample_field(const JammerField& field, numerics::RandomStream& rng);

/// Path loss from a jammer at horizontal distance r_km to the surface receiver.
double jammer_pathloss_db(double r_km, const JammerField& field,
                          const uwchannel::EnvironmentConfig& env);

/// J = P_J sum_j |H_j|^2 / PL_j, drawing one fading gain per jammer.
double aggregate_interference(const JammerRealization& realization, const JammerField& field,
                              const uwchannel::EnvironmentConfig& env,
                              numerics::RandomStream& rng);

/// Same sum with caller-supplied fading gains (one per jammer).
double aggregate_interference(const JammerRealization& realization, const JammerField& field,
                              const uwchannel::EnvironmentConfig& env,
                              std::span<const double> fading_gains);

/// E[J] by Campbell's theorem over the truncation disk.
double mean_interference(const JammerField& field, const uwchannel::EnvironmentConfig& env,
                         double tol = 1e-10);

/// E[exp(-s J)] through the PPP probability generating functional, the radial
/// integral evaluated adaptively on [0, R_trunc].
std::complex<double> lt_interference(std::complex<double> s, const JammerField& field,
                                     const uwchannel::EnvironmentConfig& env,
                                     double tol = 1e-10);

/// Laplace transform of J with the radial integral frozen into a fixed
/// composite Gauss-Legendre rule.
///
/// Panels are cut at equal steps of jammer path loss (in dB) and integrated in
/// r^2, so every node sits where the integrand is smooth whatever the
/// transform argument. Construction is O(panels); each evaluation is one pass
/// over the nodes. Agreement with lt_interference() is checked in the tests.
class InterferenceTransform {
 public:
  InterferenceTransform(const JammerField& field, const uwchannel::EnvironmentConfig& env,
                        double panel_db = 3.0);

  /// log E[exp(-s J)].
  std::complex<double> log_value(std::complex<double> s) const;
  std::complex<double> operator()(std::complex<double> s) const;
  double operator()(double s) const;

  double mean() const noexcept { return mean_; }
  /// Largest per-jammer gain P_J / PL_j, reached directly overhead.
  double max_kappa() const noexcept { return max_kappa_; }
  std::size_t node_count() const noexcept { return kappa_.size(); }

 private:
  void check_region(std::complex<double> s) const;

  double psi_;
  double mean_ = 0.0;
  double max_kappa_ = 0.0;
  std::vector<double> kappa_;
  std::vector<double> weight_;  // pi lambda dq
};

}  // namespace uwajam::stochgeom
