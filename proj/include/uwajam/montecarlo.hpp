#pragma once

#include <cstdint>

#include "uwajam/analysis.hpp"
#include "uwajam/estimate.hpp"
#include "uwajam/numerics.hpp"

namespace uwajam::montecarlo {

struct TrialPlan {
  std::uint64_t n_trials = 1000000;
  std::uint64_t seed = 1;
  analysis::Scenario scenario;
  /// 0 picks UWAJAM_THREADS or the hardware default; results do not depend on it.
  unsigned workers = 0;
};

struct TrialOutcome {
  double sjnr = 0.0;
  double d_km = 0.0;
};

/// One deployment: legitimate range, legitimate fading, jammer field and jammer fadings.
TrialOutcome run_trial(const analysis::Scenario& scenario, numerics::RandomStream& rng);

struct SimulationSummary {
  MetricEstimate coverage;
  MetricEstimate rate_se;   ///< bits/s/Hz
  MetricEstimate rate_bps;  ///< bandwidth * rate_se
  MetricEstimate ee;        ///< rate_bps / (S_p + P_t)
};

/// All metrics from one pass over the trials; trial i uses split_stream(seed, i).
SimulationSummary simulate(const TrialPlan& plan);

MetricEstimate estimate_coverage(const TrialPlan& plan);
MetricEstimate estimate_rate(const TrialPlan& plan);
MetricEstimate estimate_ee(const TrialPlan& plan);

}  // namespace uwajam::montecarlo
