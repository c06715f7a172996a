// Acceptance suite: one PASS/FAIL line per criterion.
//   uwajam_acceptance            run all
//   uwajam_acceptance 1 3        run the listed criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "uwajam/analysis.hpp"
#include "uwajam/config.hpp"
#include "uwajam/montecarlo.hpp"
#include "uwajam/numerics.hpp"
#include "uwajam/stochgeom.hpp"
#include "uwajam/sweep.hpp"
#include "uwajam/uwchannel.hpp"

using namespace uwajam;
using analysis::Depth;
using analysis::LinkAnalyzer;
using analysis::make_preset;
using numerics::Complex;

namespace {

constexpr double kZ = 4.0;  // combined standard errors allowed in agreement checks

struct Checker {
  int failed = 0;
  int total = 0;

  void check(bool ok, const std::string& what) {
    ++total;
    if (!ok) {
      ++failed;
      std::printf("    fail: %s\n", what.c_str());
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Depth kDepths[] = {Depth::shallow, Depth::mid, Depth::deep};

// Mean and standard error of 1 - exp(-s x) over the samples, two-pass so the
// spread survives when every term is close to zero.
std::pair<double, double> laplace_complement(const std::vector<double>& xs, double s) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += -std::expm1(-s * x);
  m /= n;
  double v = 0.0;
  for (double x : xs) {
    const double d = -std::expm1(-s * x) - m;
    v += d * d;
  }
  return {m, std::sqrt(v / (n - 1) / n)};
}

double kappa_at(const analysis::Scenario& s, double d_km) {
  return s.link.tx_power / uwchannel::pathloss_linear(s.env, std::max(1.0, 1000.0 * d_km));
}

// ---------------------------------------------------------------------------

void criterion_1(Checker& c) {
  for (double lam : {0.01, 0.03}) {
    for (Depth depth : kDepths) {
      const auto s = make_preset(depth, lam);
      const LinkAnalyzer an(s);
      montecarlo::TrialPlan plan;
      plan.scenario = s;
      plan.n_trials = 1000000;
      plan.seed = 20240601;
      const auto sim = montecarlo::simulate(plan);
      const auto cov = an.coverage();
      const auto rate = an.average_rate();
      const auto ee = an.energy_efficiency();
      auto agree = [&](const char* name, const MetricEstimate& a, const MetricEstimate& m) {
        const double z = std::abs(a.value - m.value) / combined_stderr(a, m);
        std::printf("    %-7s lambda=%.2f %-8s analytic=%-12.8g mc=%-12.8g z=%.2f\n",
                    analysis::to_string(depth).c_str(), lam, name, a.value, m.value, z);
        c.check(z <= kZ, fmt("%s lambda=%.2f %s z=%.2f", analysis::to_string(depth).c_str(), lam,
                             name, z));
      };
      agree("coverage", cov, sim.coverage);
      agree("rate", rate, sim.rate_se);
      agree("ee", ee, sim.ee);
    }
  }
}

void criterion_2(Checker& c) {
  for (Depth depth : kDepths) {
    const auto s = make_preset(depth, 0.0);
    const LinkAnalyzer an(s);
    const double psi = s.fading().psi;
    const double sigma2 = uwchannel::noise_power(s.env);
    // Distance-averaged Marcum form by Boost tanh-sinh over the same law.
    auto marcum = [&](double d) {
      return numerics::marcum_q1(std::sqrt(psi),
                                 std::sqrt(s.link.sjnr_threshold * sigma2 / kappa_at(s, d)));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lo = 1e-3;
    double oracle = 0.0;
    double a = lo;
    for (double b : {0.01, 0.1, 1.0, 3.0, s.env.dmax_km}) {
      oracle += ts.integrate(marcum, a, b, 1e-12);
      a = b;
    }
    oracle /= (s.env.dmax_km - lo);
    const double got = an.coverage().value;
    std::printf("    %-7s coverage=%.10f marcum=%.10f diff=%.2e\n", analysis::to_string(depth).c_str(),
                got, oracle, std::abs(got - oracle));
    c.check(std::abs(got - oracle) <= 1e-5, fmt("%s coverage differs by %.2e",
                                                analysis::to_string(depth).c_str(), std::abs(got - oracle)));

    auto ray = s;
    ray.taps.taps = {{0.0, 1.0}, {0.5 / 22000.0, 1.0}};
    const LinkAnalyzer rz(ray);
    double worst = 0.0;
    for (double d : {0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 8.0, ray.env.dmax_km}) {
      const double x = sigma2 / (2.0 * kappa_at(ray, d));
      const double ref = std::exp(x) * boost::math::expint(1, x) / std::numbers::ln2;
      worst = std::max(worst, std::abs(rz.conditional_rate(d) - ref) / ref);
    }
    std::printf("    %-7s rate vs exponential-integral form: worst relative error %.2e\n",
                analysis::to_string(depth).c_str(), worst);
    c.check(worst <= 1e-6, fmt("%s rate relative error %.2e", analysis::to_string(depth).c_str(), worst));
  }
}

void criterion_3(Checker& c) {
  const int n = 1000000;
  numerics::RandomStream rng(314159);
  std::vector<double> xs(n);
  int worst_i = 0;
  double worst_z = 0.0;
  for (double psi : {0.0, 0.5, 2.0, 10.0}) {
    for (auto& x : xs) x = uwchannel::sample_fading({psi}, rng);
    for (double s = 1e-3; s <= 100.0 * (1 + 1e-12); s *= std::sqrt(10.0)) {
      const auto [m, se] = laplace_complement(xs, s);
      const double z = std::abs(uwchannel::one_minus_lt_fading_real(s, psi) - m) / se;
      worst_z = std::max(worst_z, z);
      ++worst_i;
      c.check(z <= kZ, fmt("lt_fading psi=%g s=%g z=%.2f", psi, s, z));
    }
  }
  std::printf("    lt_fading: %d grid points, worst z=%.2f\n", worst_i, worst_z);

  worst_z = 0.0;
  int points = 0;
  for (Depth depth : kDepths) {
    for (double lam : {0.01, 0.03}) {
      const auto sc = make_preset(depth, lam);
      for (auto& j : xs) {
        j = stochgeom::aggregate_interference(stochgeom::sample_field(sc.field, rng), sc.field,
                                              sc.env, rng);
      }
      for (double s : {1e-2, 1e-1, 1.0}) {
        const auto [m, se] = laplace_complement(xs, s);
        const double log_lt = std::log(stochgeom::lt_interference(s, sc.field, sc.env)).real();
        const double z = std::abs(-std::expm1(log_lt) - m) / se;
        worst_z = std::max(worst_z, z);
        ++points;
        c.check(z <= kZ, fmt("lt_interference %s lambda=%g s=%g z=%.2f",
                             analysis::to_string(depth).c_str(), lam, s, z));
      }
    }
  }
  std::printf("    lt_interference: %d grid points, worst z=%.2f\n", points, worst_z);

  double worst_rel = 0.0;
  for (Depth depth : kDepths) {
    for (Complex s : {Complex(0.01, 0), Complex(1, 0), Complex(100, 0), Complex(0, 10),
                      Complex(0.5, -200)}) {
      auto f = make_preset(depth, 0.01);
      const Complex base = std::log(stochgeom::lt_interference(s, f.field, f.env, 1e-12));
      for (double k : {2.0, 3.0}) {
        auto g = f;
        g.field.intensity_per_km2 = 0.01 * k;
        const Complex scaled = std::log(stochgeom::lt_interference(s, g.field, g.env, 1e-12));
        const double rel = std::abs(scaled - k * base) / std::abs(k * base);
        worst_rel = std::max(worst_rel, rel);
        c.check(rel <= 1e-9, fmt("power law %s s=(%g,%g) c=%g rel=%.2e",
                                 analysis::to_string(depth).c_str(), s.real(), s.imag(), k, rel));
      }
    }
  }
  std::printf("    power law in lambda: worst relative deviation of the log %.2e\n", worst_rel);
}

// One sweep axis: analytic and 10^5-trial Monte Carlo rows per scenario.
struct AxisRun {
  cli::Axis axis;
  std::vector<double> values;
  // metric -> scenario -> per-value estimate, for each engine
  std::vector<std::vector<std::vector<MetricEstimate>>> analytic;  // [metric][scenario][value]
  std::vector<std::vector<std::vector<MetricEstimate>>> mc;
};

AxisRun run_axis(cli::Axis axis) {
  AxisRun run{axis, cli::default_values(axis), {}, {}};
  run.analytic.assign(4, std::vector<std::vector<MetricEstimate>>(3));
  run.mc.assign(4, std::vector<std::vector<MetricEstimate>>(3));
  cli::SweepSpec spec;
  spec.axis = axis;
  spec.values = run.values;
  for (Depth d : kDepths) spec.scenarios.push_back(make_preset(d));
  spec.engines = {cli::Engine::analytic, cli::Engine::montecarlo};
  spec.n_trials = 100000;
  spec.seed = 7;
  const auto res = cli::run_sweep(spec);
  for (const auto& f : res.failures) std::printf("    cell failed: %s\n", f.message.c_str());
  for (const auto& row : res.rows) {
    const int si = static_cast<int>(analysis::parse_depth(row.scenario));
    int mi = 0;
    for (const char* m : {"coverage", "avg_rate_se", "avg_rate_bps", "ee"}) {
      if (row.metric == m) break;
      ++mi;
    }
    MetricEstimate est{row.value, row.std_error, row.ci_lo, row.ci_hi, 0, 0.0};
    (row.engine == "analytic" ? run.analytic : run.mc)[mi][si].push_back(est);
  }
  return run;
}

// Direction +1: nondecreasing, -1: nonincreasing. A violation counts only
// when it exceeds the combined interval (MC) or the quadrature error (analytic).
void check_trend(Checker& c, const AxisRun& run, int metric, int direction, const char* label) {
  static const char* names[] = {"coverage", "rate", "rate_bps", "ee"};
  for (int si = 0; si < 3; ++si) {
    for (int engine = 0; engine < 2; ++engine) {
      const auto& seq = (engine == 0 ? run.analytic : run.mc)[metric][si];
      int bad = 0;
      double worst = 0.0;
      for (std::size_t i = 1; i < seq.size(); ++i) {
        const double step = direction * (seq[i].value - seq[i - 1].value);
        const double allowed = engine == 0
                                   ? 1e-6 * std::abs(seq[i].value) + 1e-9
                                   : kZ95 * combined_stderr(seq[i], seq[i - 1]);
        if (step < -allowed) {
          ++bad;
          worst = std::min(worst, step);
        }
      }
      c.check(bad == 0, fmt("%s %s %s: %d violations (worst step %.3g)", label, names[metric],
                            engine == 0 ? "analytic" : "montecarlo", bad, worst));
      (void)si;
    }
  }
}

void criterion_4(Checker& c) {
  const auto jam = run_axis(cli::Axis::jam_power);
  check_trend(c, jam, 0, -1, "vs P_J");
  check_trend(c, jam, 1, -1, "vs P_J");
  check_trend(c, jam, 3, -1, "vs P_J");
  std::printf("    jam_power sweep done (%zu values x 3 scenarios)\n", jam.values.size());

  const auto tx = run_axis(cli::Axis::tx_power);
  check_trend(c, tx, 0, +1, "vs P_t");
  check_trend(c, tx, 1, +1, "vs P_t");
  check_trend(c, tx, 3, -1, "vs P_t");
  std::printf("    tx_power sweep done (%zu values x 3 scenarios)\n", tx.values.size());

  const auto lam = run_axis(cli::Axis::intensity);
  check_trend(c, lam, 0, -1, "vs lambda");
  const auto tau = run_axis(cli::Axis::threshold);
  check_trend(c, tau, 0, -1, "vs tau");

  // Depth ordering at defaults: the tx_power sweep at 20 W holds the defaults.
  const auto at20 = static_cast<std::size_t>(
      std::find(tx.values.begin(), tx.values.end(), 20.0) - tx.values.begin());
  for (int metric : {0, 1}) {
    for (int engine = 0; engine < 2; ++engine) {
      const auto& table = engine == 0 ? tx.analytic : tx.mc;
      const auto& sh = table[metric][0][at20];
      const auto& mid = table[metric][1][at20];
      const auto& deep = table[metric][2][at20];
      std::printf("    depth order %-8s %-10s shallow=%.6g mid=%.6g deep=%.6g\n",
                  metric == 0 ? "coverage" : "rate", engine == 0 ? "analytic" : "montecarlo",
                  sh.value, mid.value, deep.value);
      auto ge = [&](const MetricEstimate& a, const MetricEstimate& b) {
        const double slack = engine == 0 ? 1e-6 * std::abs(a.value) : kZ95 * combined_stderr(a, b);
        return a.value >= b.value - slack;
      };
      c.check(ge(sh, mid) && ge(mid, deep),
              fmt("depth order %s %s: shallow=%.6g mid=%.6g deep=%.6g",
                  metric == 0 ? "coverage" : "rate", engine == 0 ? "analytic" : "montecarlo",
                  sh.value, mid.value, deep.value));
    }
  }
}

void criterion_5(Checker& c) {
  auto normal = [](double t) { return Complex(std::exp(-0.5 * t * t), 0.0); };
  auto chi2 = [](double t) { return 1.0 / Complex(1.0, -2.0 * t); };
  const double tails[] = {
      std::abs(numerics::gil_pelaez_tail(normal, 0.0) - 0.5),
      std::abs(numerics::gil_pelaez_tail(normal, 1.0) - 0.5 * std::erfc(1.0 / std::numbers::sqrt2)),
      std::abs(numerics::gil_pelaez_tail(chi2, 2.0) - std::exp(-1.0)),
  };
  for (double e : tails) c.check(e <= 1e-6, fmt("Gil-Pelaez tail error %.2e", e));
  std::printf("    Gil-Pelaez tail errors: %.1e %.1e %.1e\n", tails[0], tails[1], tails[2]);

  boost::math::quadrature::tanh_sinh<double> ts;
  double worst = 0.0;
  for (double a : {0.0, 0.5, 1.0, 2.0, 4.0, 7.0}) {
    for (double b : {0.3, 1.0, 2.0, 4.0, 8.0}) {
      const double lam = a * a;
      auto pdf = [lam](double x) {
        const double z = std::sqrt(lam * x);
        return 0.5 * std::exp(-0.5 * (x + lam)) * std::cyl_bessel_i(0.0, z);
      };
      const double hi = (a + 14.0) * (a + 14.0);
      const double oracle = b * b >= hi ? 0.0 : ts.integrate(pdf, b * b, hi, 1e-14);
      worst = std::max(worst, std::abs(numerics::marcum_q1(a, b) - oracle));
    }
  }
  std::printf("    Marcum Q1 vs density quadrature: worst error %.2e\n", worst);
  c.check(worst <= 1e-8, fmt("Marcum worst error %.2e", worst));

  numerics::RandomStream rng(555);
  const int n = 1000000;
  double s1 = 0, s2 = 0;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(numerics::sample_poisson(37.7, rng));
    s1 += k;
    s2 += k * k;
    zeros += numerics::sample_poisson(3.0, rng) == 0;
  }
  const double mean = s1 / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  const double p0 = std::exp(-3.0);
  c.check(std::abs(mean - 37.7) <= 4.0 * std::sqrt(37.7 / n), fmt("Poisson mean %.5f", mean));
  c.check(std::abs(var - 37.7) <= 0.05 * 37.7, fmt("Poisson variance %.4f", var));
  c.check(std::abs(double(zeros) / n - p0) <= 4.0 * std::sqrt(p0 * (1 - p0) / n),
          fmt("Poisson P[N=0] %.6f", double(zeros) / n));
  double z1 = 0, z2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = numerics::sample_normal(rng);
    z1 += z;
    z2 += z * z;
  }
  c.check(std::abs(z1 / n) <= 4.0 / std::sqrt(n), fmt("normal mean %.2e", z1 / n));
  c.check(std::abs(z2 / n - 1.0) <= 4.0 * std::sqrt(2.0 / n), fmt("normal variance %.5f", z2 / n));
  std::printf("    Poisson(37.7) mean %.4f var %.3f; P[N=0 | 3] %.6f; normal mean %.1e var %.5f\n",
              mean, var, double(zeros) / n, z1 / n, z2 / n);

  struct Ref {
    std::function<double(double)> f;
    double exact;
    const char* name;
  };
  const Ref refs[] = {
      {[](double x) { return std::exp(-x); }, 1.0, "exp(-x)"},
      {[](double x) { return std::exp(-x * x); }, std::sqrt(std::numbers::pi) / 2, "exp(-x^2)"},
      {[](double x) { return x == 0 ? 1.0 : std::sin(x) * std::exp(-x) / x; }, std::numbers::pi / 4,
       "sin(x)exp(-x)/x"},
  };
  for (const auto& r : refs) {
    const auto q = numerics::integrate_real(r.f, 0.0, numerics::kInf);
    const double err = std::abs(q.value - r.exact);
    std::printf("    int_0^inf %-16s true error %.2e  estimate %.2e\n", r.name, err, q.error);
    c.check(err <= q.error, fmt("%s: true error %.2e exceeds estimate %.2e", r.name, err, q.error));
  }
}

void criterion_6(Checker& c) {
  const auto s = cli::load_config_text("preset = mid\nintensity_per_km2 = 0.03\n");
  std::string sim_ref;
  std::string sweep_ref;
  cli::SweepSpec spec;
  spec.axis = cli::Axis::jam_power;
  spec.values = {10.0, 40.0, 90.0};
  spec.scenarios = {make_preset(Depth::shallow), make_preset(Depth::deep)};
  spec.engines = {cli::Engine::montecarlo, cli::Engine::semianalytic};
  spec.n_trials = 20000;
  spec.seed = 1234;
  for (unsigned workers : {1u, 4u, 16u}) {
    const auto sim = cli::to_csv(cli::evaluate_cell(s, cli::Engine::montecarlo, 1000000, 99, workers));
    const auto sweep = cli::to_csv(cli::run_sweep(spec, workers).rows);
    if (workers == 1) {
      sim_ref = sim;
      sweep_ref = sweep;
      continue;
    }
    c.check(sim == sim_ref, fmt("simulate output differs at %u workers", workers));
    c.check(sweep == sweep_ref, fmt("sweep output differs at %u workers", workers));
  }
  std::printf("    simulate: %zu bytes, sweep: %zu bytes, compared at 1/4/16 workers\n",
              sim_ref.size(), sweep_ref.size());
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Checker&);
};

const Criterion kCriteria[] = {
    {1, "analytic vs 10^6-trial Monte Carlo at six default scenarios", criterion_1},
    {2, "closed-form oracles without jammers", criterion_2},
    {3, "transform identities and power law in intensity", criterion_3},
    {4, "trends on the sweep grids and depth ordering", criterion_4},
    {5, "numerics unit checks", criterion_5},
    {6, "determinism across 1, 4 and 16 workers", criterion_6},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& cr : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), cr.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::string error;
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = error.empty() && c.failed == 0;
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::printf("criterion %d: %s  %s (%d/%d checks, %.1f s)\n", cr.id, ok ? "PASS" : "FAIL",
                cr.title, c.total - c.failed, c.total, secs);
    std::fflush(stdout);
    failures += !ok;
  }
  return failures == 0 ? 0 : 1;
}
