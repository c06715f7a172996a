#pragma once

#include <memory>
#include <string>

#include "uwajam/estimate.hpp"
#include "uwajam/numerics.hpp"
#include "uwajam/stochgeom.hpp"
#include "uwajam/uwchannel.hpp"

namespace uwajam::analysis {

struct LinkConfig {
  double tx_power = 20.0;
  double sjnr_threshold = 2.0;
  double static_power = 1.5;

  void validate() const;
};

/// One water column: environment, jammer field, legitimate link and channel taps.
struct Scenario {
  std::string label = "shallow";
  uwchannel::EnvironmentConfig env;
  stochgeom::JammerField field;
  LinkConfig link;
  uwchannel::TapProfile taps = uwchannel::TapProfile::default_profile();

  void validate() const;
  uwchannel::FadingParams fading() const;
};

enum class Depth { shallow, mid, deep };

double preset_depth_km(Depth depth);
Depth parse_depth(const std::string& name);
std::string to_string(Depth depth);

/// Default scenario for a water depth, jammer fading tied to the link's psi.
Scenario make_preset(Depth depth, double intensity_per_km2 = 0.01);

/// Legitimate range D, uniform on [min_km, dmax_km]; min_km is the 1 m path-loss reference.
struct DistanceLaw {
  double dmax_km;
  double min_km = 1e-3;

  double density() const { return 1.0 / (dmax_km - min_km); }
};

struct AnalysisOptions {
  /// Distance averaging.
  numerics::QuadratureSpec outer{1e-6, 1e-9, 200000, numerics::Transform::log_compress};
  /// Gil-Pelaez and Hamdi integrals at fixed distance.
  numerics::QuadratureSpec inner{1e-8, 1e-11, 200000, numerics::Transform::log_compress};
  /// Panel width of the frozen radial rule for the jamming transform.
  double radial_panel_db = 3.0;
};

/// Precomputes the scenario-wide pieces (psi, noise, jamming transform) once
/// and evaluates every analytic metric from them.
class LinkAnalyzer {
 public:
  explicit LinkAnalyzer(Scenario scenario, AnalysisOptions options = {});

  const Scenario& scenario() const noexcept { return scenario_; }
  double psi() const noexcept { return psi_; }
  double noise_power() const noexcept { return sigma2_; }
  DistanceLaw distance_law() const { return {scenario_.env.dmax_km}; }
  const stochgeom::InterferenceTransform& jamming_transform() const { return lt_jam_; }

  /// P[SJNR >= tau | D = d] by Gil-Pelaez inversion of zeta - tau J.
  double conditional_coverage(double d_km) const;
  /// Spectral efficiency E[log2(1 + SJNR) | D = d] via Hamdi's lemma.
  double conditional_rate(double d_km) const;

  MetricEstimate coverage() const;
  /// bits/s/Hz
  MetricEstimate average_rate() const;
  /// bits/s per unit of total power.
  MetricEstimate energy_efficiency() const;

 private:
  double kappa(double d_km) const;
  template <class F>
  MetricEstimate distance_average(F&& conditional) const;

  Scenario scenario_;
  AnalysisOptions options_;
  double psi_;
  double sigma2_;
  stochgeom::InterferenceTransform lt_jam_;
};

double conditional_coverage(double d_km, const Scenario& scenario);
double coverage(const Scenario& scenario);
double conditional_rate(double d_km, const Scenario& scenario);
double average_rate(const Scenario& scenario);
double energy_efficiency(const Scenario& scenario);

/// Averages Q1(sqrt(psi), sqrt(PL(d) tau (J + sigma^2) / P_t)) over sampled
/// (d, J) pairs. Sample i draws from split_stream(rng, i).
MetricEstimate semianalytic_coverage(const Scenario& scenario, std::uint64_t n_fields,
                                     const numerics::RandomStream& rng, unsigned workers = 0);

}  // namespace uwajam::analysis
