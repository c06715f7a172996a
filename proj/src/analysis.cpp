#include "uwajam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "uwajam/parallel.hpp"

namespace uwajam::analysis {

using numerics::Complex;

void LinkConfig::validate() const {
  if (!(tx_power >= 0) || !std::isfinite(tx_power)) {
    throw DomainError("tx_power: must be finite and >= 0");
  }
  if (!(sjnr_threshold >= 0) || !std::isfinite(sjnr_threshold)) {
    throw DomainError("sjnr_threshold: must be finite and >= 0");
  }
  if (!(static_power >= 0) || !std::isfinite(static_power)) {
    throw DomainError("static_power: must be finite and >= 0");
  }
  if (!(static_power + tx_power > 0)) {
    throw DomainError("static_power: static_power + tx_power must be > 0");
  }
}

void Scenario::validate() const {
  env.validate();
  field.validate();
  link.validate();
  taps.validate();
  if (env.depth_km != field.depth_km) {
    throw DomainError("depth_km: environment and jammer field must share one water column");
  }
  if (env.dmax_km <= DistanceLaw{env.dmax_km}.min_km) {
    throw DomainError("dmax_km: must exceed the 1 m reference distance");
  }
}

uwchannel::FadingParams Scenario::fading() const {
  return uwchannel::psi_from_taps(taps, env.frequency_khz);
}

double preset_depth_km(Depth depth) {
  switch (depth) {
    case Depth::shallow: return 0.1;
    case Depth::mid: return 1.0;
    case Depth::deep: return 2.0;
  }
  return 0.1;
}

Depth parse_depth(const std::string& name) {
  if (name == "shallow") return Depth::shallow;
  if (name == "mid") return Depth::mid;
  if (name == "deep") return Depth::deep;
  throw DomainError("preset: unknown water depth '" + name + "' (shallow, mid, deep)");
}

std::string to_string(Depth depth) {
  switch (depth) {
    case Depth::shallow: return "shallow";
    case Depth::mid: return "mid";
    case Depth::deep: return "deep";
  }
  return "shallow";
}

Scenario make_preset(Depth depth, double intensity_per_km2) {
  Scenario s;
  s.label = to_string(depth);
  const double rho = preset_depth_km(depth);
  s.env.depth_km = rho;
  s.env.dmax_km = std::sqrt(100.0 + rho * rho);
  s.field.depth_km = rho;
  s.field.intensity_per_km2 = intensity_per_km2;
  s.field.jammer_fading = s.fading();
  return s;
}

// ---------------------------------------------------------------------------

LinkAnalyzer::LinkAnalyzer(Scenario scenario, AnalysisOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      psi_((scenario_.validate(), scenario_.fading().psi)),
      sigma2_(uwchannel::noise_power(scenario_.env)),
      lt_jam_(scenario_.field, scenario_.env, options.radial_panel_db) {
  if (!(scenario_.link.tx_power > 0)) throw DomainError("tx_power: analytic engine needs > 0");
  if (!(scenario_.link.sjnr_threshold > 0)) {
    throw DomainError("sjnr_threshold: analytic engine needs > 0");
  }
}

double LinkAnalyzer::kappa(double d_km) const {
  if (!(d_km > 0) || d_km > scenario_.env.dmax_km * (1 + 1e-12)) {
    std::ostringstream os;
    os << "distance " << d_km << " km outside (0, dmax]";
    throw DomainError(os.str());
  }
  // Below the 1 m reference the path loss is held at its reference value.
  const double d_m = std::max(1000.0 * d_km, 1.0);
  return scenario_.link.tx_power / uwchannel::pathloss_linear(scenario_.env, d_m);
}

double LinkAnalyzer::conditional_coverage(double d_km) const {
  const double k = kappa(d_km);
  const double tau = scenario_.link.sjnr_threshold;
  // Work with U = |H|^2 - (tau / kappa) J against u = tau sigma^2 / kappa.
  const double jam_scale = tau / k;
  const double u = tau * sigma2_ / k;
  const uwchannel::FadingParams fading{psi_};
  auto cf = [&](double t) {
    return uwchannel::lt_fading(Complex(0.0, -t), fading) * lt_jam_(Complex(0.0, jam_scale * t));
  };
  numerics::GilPelaezOptions gp;
  gp.scale = 1.0;
  gp.mean = 2.0 + psi_ - jam_scale * lt_jam_.mean();
  try {
    return numerics::gil_pelaez_tail_detailed(cf, u, options_.inner, gp).probability;
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "conditional coverage at d = " << d_km << " km: " << e.what();
    throw NumericalError(os.str(), e.partial_value(), e.error_estimate(), e.evaluations());
  }
}

double LinkAnalyzer::conditional_rate(double d_km) const {
  const double k = kappa(d_km);
  const double u = sigma2_ / k;
  const double inv_k = 1.0 / k;
  const double psi = psi_;
  // s' = kappa s, v = ln s'; the integrand of Hamdi's lemma times s' in log space.
  auto h = [&](double v) {
    const double x = std::exp(v);
    return lt_jam_(x * inv_k) * uwchannel::one_minus_lt_fading_real(x, psi) * std::exp(-u * x);
  };
  const auto& spec = options_.inner;
  const double v_lo = std::log(1e-3 * spec.abs_tol / (2.0 + psi));
  const double v_hi = std::max(std::log(50.0 / u), v_lo + 1.0);
  std::vector<double> edges{v_lo};
  while (edges.back() < v_hi) edges.push_back(std::min(edges.back() + std::numbers::ln10, v_hi));
  try {
    auto r = numerics::integrate(h, std::span<const double>(edges), spec);
    const double below = (2.0 + psi) * std::exp(v_lo);
    return (r.value + below) / std::numbers::ln2;
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "conditional rate at d = " << d_km << " km: " << e.what();
    throw NumericalError(os.str(), e.partial_value(), e.error_estimate(), e.evaluations());
  }
}

template <class F>
MetricEstimate LinkAnalyzer::distance_average(F&& conditional) const {
  const DistanceLaw law = distance_law();
  std::vector<double> edges{law.min_km};
  for (double b : {0.01, 0.1, 1.0}) {
    if (b > law.min_km && b < law.dmax_km) edges.push_back(b);
  }
  edges.push_back(law.dmax_km);
  auto r = numerics::integrate(std::forward<F>(conditional), std::span<const double>(edges),
                               options_.outer);
  return MetricEstimate::exact(r.value * law.density(), r.error * law.density());
}

MetricEstimate LinkAnalyzer::coverage() const {
  auto m = distance_average([this](double d) { return conditional_coverage(d); });
  m.value = std::clamp(m.value, 0.0, 1.0);
  m.ci_lo = m.ci_hi = m.value;
  return m;
}

MetricEstimate LinkAnalyzer::average_rate() const {
  return distance_average([this](double d) { return conditional_rate(d); });
}

MetricEstimate LinkAnalyzer::energy_efficiency() const {
  const auto rate = average_rate();
  const double scale =
      scenario_.env.bandwidth_hz / (scenario_.link.static_power + scenario_.link.tx_power);
  return MetricEstimate::exact(rate.value * scale, rate.quad_error * scale);
}

double conditional_coverage(double d_km, const Scenario& scenario) {
  return LinkAnalyzer(scenario).conditional_coverage(d_km);
}

double coverage(const Scenario& scenario) { return LinkAnalyzer(scenario).coverage().value; }

double conditional_rate(double d_km, const Scenario& scenario) {
  return LinkAnalyzer(scenario).conditional_rate(d_km);
}

double average_rate(const Scenario& scenario) {
  return LinkAnalyzer(scenario).average_rate().value;
}

double energy_efficiency(const Scenario& scenario) {
  return LinkAnalyzer(scenario).energy_efficiency().value;
}

// ---------------------------------------------------------------------------

MetricEstimate semianalytic_coverage(const Scenario& scenario, std::uint64_t n_fields,
                                     const numerics::RandomStream& rng, unsigned workers) {
  scenario.validate();
  if (n_fields < 1000) throw DomainError("semianalytic_coverage: needs at least 1000 fields");
  const double a = std::sqrt(scenario.fading().psi);
  const double sigma2 = uwchannel::noise_power(scenario.env);
  const DistanceLaw law{scenario.env.dmax_km};
  const double tau = scenario.link.sjnr_threshold;
  const double pt = scenario.link.tx_power;

  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (n_fields + kChunk - 1) / kChunk;
  auto parts = parallel_map<RunningStats>(chunks, resolve_workers(workers), [&](std::size_t c) {
    RunningStats st;
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(n_fields, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      auto stream = numerics::split_stream(rng, i);
      const double d_km = law.min_km + (law.dmax_km - law.min_km) * stream.uniform();
      const auto field = stochgeom::sample_field(scenario.field, stream);
      const double jam = stochgeom::aggregate_interference(field, scenario.field, scenario.env, stream);
      const double pl = uwchannel::pathloss_linear(scenario.env, 1000.0 * d_km);
      const double b = std::sqrt(pl * tau * (jam + sigma2) / pt);
      st.add(numerics::marcum_q1(a, b));
    }
    return st;
  });
  RunningStats total;
  for (const auto& p : parts) total.merge(p);
  auto est = mean_estimate(total);
  est.ci_lo = std::max(0.0, est.ci_lo);
  est.ci_hi = std::min(1.0, est.ci_hi);
  return est;
}

}  // namespace uwajam::analysis
