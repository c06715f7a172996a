#include "uwajam/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "uwajam/parallel.hpp"

namespace uwajam {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("UWAJAM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace montecarlo {

namespace {

// Scenario constants hoisted out of the trial loop.
struct TrialContext {
  explicit TrialContext(const analysis::Scenario& s)
      : scenario(s),
        fading(s.fading()),
        sigma2(uwchannel::noise_power(s.env)),
        law{s.env.dmax_km} {}

  TrialOutcome run(numerics::RandomStream& rng) const {
    const double d_km = law.min_km + (law.dmax_km - law.min_km) * rng.uniform();
    const double h2 = uwchannel::sample_fading(fading, rng);
    const double zeta =
        scenario.link.tx_power * h2 / uwchannel::pathloss_linear(scenario.env, 1000.0 * d_km);
    const auto field = stochgeom::sample_field(scenario.field, rng);
    const double jam = stochgeom::aggregate_interference(field, scenario.field, scenario.env, rng);
    return {zeta / (jam + sigma2), d_km};
  }

  const analysis::Scenario& scenario;
  uwchannel::FadingParams fading;
  double sigma2;
  analysis::DistanceLaw law;
};

struct ChunkTally {
  std::uint64_t covered = 0;
  RunningStats rate;
};

}  // namespace

TrialOutcome run_trial(const analysis::Scenario& scenario, numerics::RandomStream& rng) {
  return TrialContext(scenario).run(rng);
}

SimulationSummary simulate(const TrialPlan& plan) {
  if (plan.n_trials < 1) throw DomainError("n_trials: must be >= 1");
  plan.scenario.validate();
  const TrialContext ctx(plan.scenario);
  const double tau = plan.scenario.link.sjnr_threshold;
  const numerics::RandomStream root(plan.seed);

  // Fixed chunking: the reduction tree is the same for any worker count.
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t n = plan.n_trials;
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  auto parts = parallel_map<ChunkTally>(chunks, resolve_workers(plan.workers), [&](std::size_t c) {
    ChunkTally tally;
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(n, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      auto rng = numerics::split_stream(root, i);
      const auto trial = ctx.run(rng);
      if (trial.sjnr >= tau) ++tally.covered;
      tally.rate.add(std::log2(1.0 + trial.sjnr));
    }
    return tally;
  });

  std::uint64_t covered = 0;
  RunningStats rate;
  for (const auto& p : parts) {
    covered += p.covered;
    rate.merge(p.rate);
  }

  SimulationSummary out;
  out.coverage = proportion_estimate(covered, n);
  out.rate_se = mean_estimate(rate);
  const double bw = plan.scenario.env.bandwidth_hz;
  auto scaled = [](MetricEstimate m, double k) {
    m.value *= k;
    m.std_error *= k;
    m.ci_lo *= k;
    m.ci_hi *= k;
    return m;
  };
  out.rate_bps = scaled(out.rate_se, bw);
  const double power = plan.scenario.link.static_power + plan.scenario.link.tx_power;
  out.ee = scaled(out.rate_se, bw / power);
  out.ee.value = bw * out.rate_se.value / power;
  return out;
}

MetricEstimate estimate_coverage(const TrialPlan& plan) { return simulate(plan).coverage; }
MetricEstimate estimate_rate(const TrialPlan& plan) { return simulate(plan).rate_se; }
MetricEstimate estimate_ee(const TrialPlan& plan) { return simulate(plan).ee; }

}  // namespace montecarlo
}  // namespace uwajam
