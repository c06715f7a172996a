#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uwajam/analysis.hpp"
#include "uwajam/estimate.hpp"

namespace uwajam::cli {

enum class Axis { tx_power, jam_power, intensity, threshold };
enum class Engine { analytic, montecarlo, semianalytic };

Axis parse_axis(const std::string& name);
Engine parse_engine(const std::string& name);
std::string to_string(Axis axis);
std::string to_string(Engine engine);

/// Default grid for an axis: 5..100 W in steps of 5 for powers, {0.01, 0.03}
/// for intensity, {2, 4} for the threshold.
std::vector<double> default_values(Axis axis);

/// Returns a copy of the scenario with the axis parameter set to value.
analysis::Scenario apply_axis(analysis::Scenario scenario, Axis axis, double value);

struct SweepSpec {
  Axis axis = Axis::jam_power;
  std::vector<double> values = default_values(Axis::jam_power);
  std::vector<analysis::Scenario> scenarios;
  std::vector<Engine> engines{Engine::analytic};
  std::uint64_t n_trials = 100000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Sweep file: global keys axis, values (list or start:stop:step), scenarios,
/// engines, trials, seed; any other global key overrides every scenario and
/// `[scenario.<name>]` sections override one.
SweepSpec load_sweep_text(const std::string& text, const std::string& source = "<string>");
SweepSpec load_sweep(const std::filesystem::path& path);

struct ResultRow {
  std::string scenario;
  std::string engine;
  std::string axis;
  double axis_value = 0.0;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

inline constexpr const char* kCsvHeader =
    "scenario,engine,axis,axis_value,metric,value,stderr,ci_lo,ci_hi";

struct CellFailure {
  std::string scenario;
  std::string engine;
  double axis_value = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<CellFailure> failures;
};

/// Metric rows for one engine on one scenario, in the fixed metric order.
/// Sampling engines use a single worker; trial streams derive from seed.
std::vector<ResultRow> evaluate_cell(const analysis::Scenario& scenario, Engine engine,
                                     std::uint64_t n_trials, std::uint64_t seed,
                                     unsigned workers = 1);

/// Evaluates every (scenario, engine, value) cell over a worker pool. Rows come
/// out ordered by scenario, engine, axis value, metric. A failed cell yields
/// NaN rows and a CellFailure entry.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::string to_csv(const std::vector<ResultRow>& rows);

struct ValidationEntry {
  std::string metric;
  std::string engine;  ///< compared against analytic
  double analytic = 0.0;
  double sampled = 0.0;
  double combined_se = 0.0;
  double z = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  double z_limit = 4.0;
  bool passed() const;
};

struct ValidationOptions {
  /// Multiplies the threshold seen by the analytic engine only; 1 leaves it intact.
  double analytic_threshold_scale = 1.0;
  double z_limit = 4.0;
  unsigned workers = 0;
};

/// Runs analytic, Monte Carlo and semi-analytic engines and scores each
/// |analytic - sampled| in combined standard errors.
ValidationReport validate(const analysis::Scenario& scenario, std::uint64_t n_trials,
                          std::uint64_t seed, const ValidationOptions& options = {});

void print_report(const ValidationReport& report, std::ostream& out);

}  // namespace uwajam::cli
