#include "uwajam/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "uwajam/config.hpp"
#include "uwajam/errors.hpp"
#include "uwajam/montecarlo.hpp"
#include "uwajam/parallel.hpp"

namespace uwajam::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kMetrics[] = {"coverage", "avg_rate_se", "avg_rate_bps", "ee"};

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ResultRow make_row(const analysis::Scenario& s, Engine e, const char* metric,
                   const MetricEstimate& m) {
  return {s.label, to_string(e), "", 0.0, metric, m.value, m.std_error, m.ci_lo, m.ci_hi};
}

std::size_t metric_count(Engine e) { return e == Engine::semianalytic ? 1 : 4; }

}  // namespace

Axis parse_axis(const std::string& name) {
  if (name == "tx_power") return Axis::tx_power;
  if (name == "jam_power") return Axis::jam_power;
  if (name == "intensity") return Axis::intensity;
  if (name == "threshold") return Axis::threshold;
  throw DomainError("axis: unknown '" + name + "' (tx_power, jam_power, intensity, threshold)");
}

Engine parse_engine(const std::string& name) {
  if (name == "analytic") return Engine::analytic;
  if (name == "montecarlo") return Engine::montecarlo;
  if (name == "semianalytic") return Engine::semianalytic;
  throw DomainError("engines: unknown '" + name + "' (analytic, montecarlo, semianalytic)");
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::tx_power: return "tx_power";
    case Axis::jam_power: return "jam_power";
    case Axis::intensity: return "intensity";
    case Axis::threshold: return "threshold";
  }
  return "";
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::analytic: return "analytic";
    case Engine::montecarlo: return "montecarlo";
    case Engine::semianalytic: return "semianalytic";
  }
  return "";
}

std::vector<double> default_values(Axis axis) {
  switch (axis) {
    case Axis::intensity: return {0.01, 0.03};
    case Axis::threshold: return {2.0, 4.0};
    default: break;
  }
  std::vector<double> v;
  for (int p = 5; p <= 100; p += 5) v.push_back(p);
  return v;
}

analysis::Scenario apply_axis(analysis::Scenario s, Axis axis, double value) {
  switch (axis) {
    case Axis::tx_power: s.link.tx_power = value; break;
    case Axis::jam_power: s.field.jam_power = value; break;
    case Axis::intensity: s.field.intensity_per_km2 = value; break;
    case Axis::threshold: s.link.sjnr_threshold = value; break;
  }
  return s;
}

void SweepSpec::validate() const {
  if (values.empty()) throw DomainError("values: must not be empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw DomainError("values: must be strictly increasing");
  }
  if (engines.empty()) throw DomainError("engines: need at least one engine");
  if (scenarios.empty()) throw DomainError("scenarios: need at least one scenario");
  for (const auto& s : scenarios) {
    for (double v : values) apply_axis(s, axis, v).validate();
  }
}

SweepSpec load_sweep_text(const std::string& text, const std::string& source) {
  const ConfigDocument doc = parse_config(text, source);
  SweepSpec spec;
  std::map<std::string, ConfigEntry> overrides;
  bool have_values = false;
  std::vector<std::string> names{"shallow", "mid", "deep"};
  for (const auto& [key, entry] : doc.global) {
    try {
      if (key == "axis") {
        spec.axis = parse_axis(entry.value);
      } else if (key == "values") {
        spec.values = parse_double_list(entry.value, source, entry.line, key);
        have_values = true;
      } else if (key == "scenarios") {
        names = split_names(entry.value);
      } else if (key == "engines") {
        spec.engines.clear();
        for (const auto& n : split_names(entry.value)) spec.engines.push_back(parse_engine(n));
      } else if (key == "trials") {
        spec.n_trials = static_cast<std::uint64_t>(parse_double(entry.value, source, entry.line, key));
      } else if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(parse_double(entry.value, source, entry.line, key));
      } else {
        overrides[key] = entry;
      }
    } catch (const DomainError& e) {
      throw ConfigError(source, entry.line, e.what());
    }
  }
  if (!have_values) spec.values = default_values(spec.axis);
  for (const auto& name : names) {
    const auto* section = doc.section(name);
    std::optional<analysis::Depth> preset;
    try {
      preset = analysis::parse_depth(name);
    } catch (const DomainError&) {
      if (!section) throw ConfigError(source, 0, "scenarios: no preset or section named " + name);
    }
    spec.scenarios.push_back(scenario_from_entries({&overrides, section}, source, preset, name));
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_sweep_text(ss.str(), path.string());
}

std::vector<ResultRow> evaluate_cell(const analysis::Scenario& scenario, Engine engine,
                                     std::uint64_t n_trials, std::uint64_t seed,
                                     unsigned workers) {
  std::vector<ResultRow> rows;
  switch (engine) {
    case Engine::analytic: {
      const analysis::LinkAnalyzer an(scenario);
      const auto rate = an.average_rate();
      const double bw = scenario.env.bandwidth_hz;
      const double power = scenario.link.static_power + scenario.link.tx_power;
      auto bps = MetricEstimate::exact(rate.value * bw, rate.quad_error * bw);
      auto ee = MetricEstimate::exact(rate.value * bw / power, rate.quad_error * bw / power);
      rows.push_back(make_row(scenario, engine, kMetrics[0], an.coverage()));
      rows.push_back(make_row(scenario, engine, kMetrics[1], rate));
      rows.push_back(make_row(scenario, engine, kMetrics[2], bps));
      rows.push_back(make_row(scenario, engine, kMetrics[3], ee));
      break;
    }
    case Engine::montecarlo: {
      montecarlo::TrialPlan plan;
      plan.n_trials = n_trials;
      plan.seed = seed;
      plan.scenario = scenario;
      plan.workers = workers;
      const auto sim = montecarlo::simulate(plan);
      rows.push_back(make_row(scenario, engine, kMetrics[0], sim.coverage));
      rows.push_back(make_row(scenario, engine, kMetrics[1], sim.rate_se));
      rows.push_back(make_row(scenario, engine, kMetrics[2], sim.rate_bps));
      rows.push_back(make_row(scenario, engine, kMetrics[3], sim.ee));
      break;
    }
    case Engine::semianalytic: {
      const numerics::RandomStream rng(seed, 1);
      const auto cov = analysis::semianalytic_coverage(scenario, n_trials, rng, workers);
      rows.push_back(make_row(scenario, engine, kMetrics[0], cov));
      break;
    }
  }
  return rows;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  struct Cell {
    std::size_t scenario;
    Engine engine;
    double value;
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    for (Engine e : spec.engines) {
      for (double v : spec.values) cells.push_back({s, e, v});
    }
  }
  struct CellOutput {
    std::vector<ResultRow> rows;
    std::string error;
  };
  const std::string axis = to_string(spec.axis);
  auto outputs = parallel_map<CellOutput>(cells.size(), resolve_workers(workers), [&](std::size_t i) {
    const Cell& c = cells[i];
    const auto scenario = apply_axis(spec.scenarios[c.scenario], spec.axis, c.value);
    CellOutput out;
    try {
      out.rows = evaluate_cell(scenario, c.engine, spec.n_trials, spec.seed, 1);
    } catch (const std::exception& e) {
      out.error = e.what();
      out.rows.clear();
      for (std::size_t m = 0; m < metric_count(c.engine); ++m) {
        out.rows.push_back({scenario.label, to_string(c.engine), "", 0.0, kMetrics[m], kNaN, kNaN,
                            kNaN, kNaN});
      }
    }
    for (auto& r : out.rows) {
      r.axis = axis;
      r.axis_value = c.value;
    }
    return out;
  });

  SweepResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& o = outputs[i];
    if (!o.error.empty()) {
      result.failures.push_back({spec.scenarios[cells[i].scenario].label,
                                 to_string(cells[i].engine), cells[i].value, o.error});
    }
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
  }
  return result;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.engine << ',' << r.axis << ',' << format_double(r.axis_value)
        << ',' << r.metric << ',' << format_double(r.value) << ',' << format_double(r.std_error)
        << ',' << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << '\n';
  }
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

bool ValidationReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

ValidationReport validate(const analysis::Scenario& scenario, std::uint64_t n_trials,
                          std::uint64_t seed, const ValidationOptions& options) {
  if (n_trials < 10000) throw DomainError("n_trials: validation needs at least 10^4 trials");
  scenario.validate();
  auto perturbed = scenario;
  perturbed.link.sjnr_threshold *= options.analytic_threshold_scale;
  const auto analytic = evaluate_cell(perturbed, Engine::analytic, n_trials, seed);
  const auto mc = evaluate_cell(scenario, Engine::montecarlo, n_trials, seed, options.workers);
  const auto semi = evaluate_cell(scenario, Engine::semianalytic, n_trials, seed, options.workers);

  ValidationReport report;
  report.z_limit = options.z_limit;
  auto score = [&](const ResultRow& a, const ResultRow& b, const std::string& engine) {
    ValidationEntry e;
    e.metric = a.metric;
    e.engine = engine;
    e.analytic = a.value;
    e.sampled = b.value;
    e.combined_se = std::hypot(a.std_error, b.std_error);
    const double diff = std::abs(a.value - b.value);
    e.z = e.combined_se > 0 ? diff / e.combined_se
                            : (diff == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    e.passed = e.z <= options.z_limit;
    report.entries.push_back(e);
  };
  for (std::size_t m = 0; m < analytic.size(); ++m) score(analytic[m], mc[m], "montecarlo");
  score(analytic[0], semi[0], "semianalytic");
  return report;
}

void print_report(const ValidationReport& report, std::ostream& out) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "metric" << std::setw(14) << "engine" << std::right
     << std::setw(16) << "analytic" << std::setw(16) << "sampled" << std::setw(14) << "comb_se"
     << std::setw(10) << "z" << "  status\n";
  for (const auto& e : report.entries) {
    os << std::left << std::setw(14) << e.metric << std::setw(14) << e.engine << std::right
       << std::setw(16) << std::setprecision(8) << e.analytic << std::setw(16) << e.sampled
       << std::setw(14) << std::setprecision(3) << e.combined_se << std::setw(10)
       << std::setprecision(3) << e.z << "  " << (e.passed ? "ok" : "FAIL") << '\n';
  }
  os << (report.passed() ? "validation passed" : "validation FAILED") << " (limit "
     << report.z_limit << " combined standard errors)\n";
  out << os.str();
}

}  // namespace uwajam::cli
