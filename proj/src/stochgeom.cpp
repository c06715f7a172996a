#include "uwajam/stochgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace uwajam::stochgeom {

using numerics::Complex;
using uwchannel::EnvironmentConfig;

void JammerField::validate() const {
  if (!(intensity_per_km2 >= 0) || !std::isfinite(intensity_per_km2)) {
    throw DomainError("intensity_per_km2: must be finite and >= 0");
  }
  if (!(jam_power >= 0) || !std::isfinite(jam_power)) {
    throw DomainError("jam_power: must be finite and >= 0");
  }
  if (!(trunc_radius_km > 0) || !std::isfinite(trunc_radius_km)) {
    throw DomainError("trunc_radius_km: must be > 0");
  }
  if (!(depth_km > 0) || !std::isfinite(depth_km)) {
    throw DomainError("depth_km: must be > 0");
  }
  jammer_fading.validate();
}

JammerRealization sample_field(const JammerField& field, numerics::RandomStream& rng) {
  const double r = field.trunc_radius_km;
  const double mean = field.intensity_per_km2 * std::numbers::pi * r * r;
  const auto n = numerics::sample_poisson(mean, rng);
  JammerRealization out;
  out.radii_km.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // 1 - U lies in (0, 1], keeping radii in (0, R].
    out.radii_km.push_back(r * std::sqrt(1.0 - rng.uniform()));
  }
  return out;
}

namespace {

double slant_range_m(double r_km, double depth_km) {
  return 1000.0 * std::hypot(r_km, depth_km);
}

double kappa_at_q(double q, const JammerField& field, const EnvironmentConfig& env) {
  const double d_m = 1000.0 * std::sqrt(q + field.depth_km * field.depth_km);
  return field.jam_power / uwchannel::pathloss_linear(env, d_m);
}

double pathloss_db_at_q(double q, const JammerField& field, const EnvironmentConfig& env) {
  return uwchannel::pathloss_db(env, 1000.0 * std::sqrt(q + field.depth_km * field.depth_km));
}

// q = r^2 (km^2) where the jammer path loss reaches `target_db`.
double q_for_pathloss(double target_db, double q_max, const JammerField& field,
                      const EnvironmentConfig& env) {
  double lo = 0.0;
  double hi = q_max;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * q_max; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pathloss_db_at_q(mid, field, env) < target_db) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Breakpoints in q at equal path-loss steps across [0, R^2].
std::vector<double> pathloss_partition(const JammerField& field, const EnvironmentConfig& env,
                                       double step_db) {
  const double q_max = field.trunc_radius_km * field.trunc_radius_km;
  const double pl0 = pathloss_db_at_q(0.0, field, env);
  const double pl1 = pathloss_db_at_q(q_max, field, env);
  const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((pl1 - pl0) / step_db)));
  std::vector<double> q{0.0};
  for (std::size_t k = 1; k < panels; ++k) {
    const double target = pl0 + (pl1 - pl0) * static_cast<double>(k) / static_cast<double>(panels);
    q.push_back(q_for_pathloss(target, q_max, field, env));
  }
  q.push_back(q_max);
  return q;
}

}  // namespace

double jammer_pathloss_db(double r_km, const JammerField& field, const EnvironmentConfig& env) {
  if (!(r_km >= 0)) throw DomainError("jammer_pathloss_db: r must be >= 0");
  return uwchannel::pathloss_db(env, slant_range_m(r_km, field.depth_km));
}

double aggregate_interference(const JammerRealization& realization, const JammerField& field,
                              const EnvironmentConfig& env, numerics::RandomStream& rng) {
  double j = 0.0;
  for (double r : realization.radii_km) {
    const double h2 = uwchannel::sample_fading(field.jammer_fading, rng);
    j += field.jam_power * h2 /
         uwchannel::pathloss_linear(env, slant_range_m(r, field.depth_km));
  }
  return j;
}

double aggregate_interference(const JammerRealization& realization, const JammerField& field,
                              const EnvironmentConfig& env,
                              std::span<const double> fading_gains) {
  if (fading_gains.size() != realization.radii_km.size()) {
    throw DomainError("aggregate_interference: one fading gain per jammer is required");
  }
  double j = 0.0;
  for (std::size_t i = 0; i < fading_gains.size(); ++i) {
    j += field.jam_power * fading_gains[i] /
         uwchannel::pathloss_linear(env, slant_range_m(realization.radii_km[i], field.depth_km));
  }
  return j;
}

double mean_interference(const JammerField& field, const EnvironmentConfig& env, double tol) {
  field.validate();
  if (field.intensity_per_km2 == 0 || field.jam_power == 0) return 0.0;
  const auto q = pathloss_partition(field, env, 10.0);
  numerics::QuadratureSpec spec;
  spec.rel_tol = tol;
  spec.abs_tol = 1e-300;
  auto r = numerics::integrate(
      [&](double x) { return kappa_at_q(x, field, env); }, std::span<const double>(q), spec);
  return std::numbers::pi * field.intensity_per_km2 * (2.0 + field.jammer_fading.psi) * r.value;
}

Complex lt_interference(Complex s, const JammerField& field, const EnvironmentConfig& env,
                        double tol) {
  field.validate();
  const double lambda = field.intensity_per_km2;
  if (lambda == 0.0 || field.jam_power == 0.0 || s == Complex(0.0, 0.0)) return 1.0;
  const double kappa_max = kappa_at_q(0.0, field, env);
  if (!(1.0 + 2.0 * kappa_max * s.real() > 0)) {
    throw DomainError("lt_interference: argument outside Re(1 + 2 kappa_j s) > 0");
  }

  auto bracket = [&](double q) {
    return uwchannel::one_minus_lt_fading(s, field.jammer_fading, kappa_at_q(q, field, env));
  };

  // Drop the far field once the bracket is negligible against its peak.
  auto q = pathloss_partition(field, env, 10.0);
  double peak = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double mag = std::abs(bracket(q[k]));
    peak = std::max(peak, mag);
    if (k > 0 && mag < 1e-12 * peak) {
      q.resize(k + 1);
      break;
    }
  }

  numerics::QuadratureSpec spec;
  spec.rel_tol = tol;
  spec.abs_tol = 1e-2 * tol / (std::numbers::pi * lambda);
  auto r = numerics::integrate(bracket, std::span<const double>(q), spec);
  return std::exp(-std::numbers::pi * lambda * r.value);
}

// ---------------------------------------------------------------------------

InterferenceTransform::InterferenceTransform(const JammerField& field,
                                             const EnvironmentConfig& env, double panel_db)
    : psi_(field.jammer_fading.psi) {
  field.validate();
  if (field.intensity_per_km2 == 0.0 || field.jam_power == 0.0) return;
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const auto q = pathloss_partition(field, env, panel_db);
  const double scale = std::numbers::pi * field.intensity_per_km2;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    const double c = 0.5 * (q[k] + q[k + 1]);
    const double h = 0.5 * (q[k + 1] - q[k]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        kappa_.push_back(kappa_at_q(c + sign * h * x[i], field, env));
        weight_.push_back(scale * h * w[i]);
      }
    }
  }
  max_kappa_ = kappa_at_q(0.0, field, env);
  for (std::size_t i = 0; i < kappa_.size(); ++i) {
    mean_ += weight_[i] * kappa_[i];
  }
  mean_ *= 2.0 + psi_;
}

void InterferenceTransform::check_region(Complex s) const {
  if (!(1.0 + 2.0 * max_kappa_ * s.real() > 0)) {
    throw DomainError("lt_interference: argument outside Re(1 + 2 kappa_j s) > 0");
  }
}

Complex InterferenceTransform::log_value(Complex s) const {
  if (kappa_.empty()) return 0.0;
  check_region(s);
  Complex sum{};
  for (std::size_t i = 0; i < kappa_.size(); ++i) {
    const Complex xs = kappa_[i] * s;
    const Complex den = 1.0 + 2.0 * xs;
    sum += weight_[i] * (2.0 * xs - numerics::expm1(-psi_ * xs / den)) / den;
  }
  return -sum;
}

Complex InterferenceTransform::operator()(Complex s) const { return std::exp(log_value(s)); }

double InterferenceTransform::operator()(double s) const {
  if (kappa_.empty()) return 1.0;
  check_region(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < kappa_.size(); ++i) {
    sum += weight_[i] * uwchannel::one_minus_lt_fading_real(kappa_[i] * s, psi_);
  }
  return std::exp(-sum);
}

}  // namespace uwajam::stochgeom
