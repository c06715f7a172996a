#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uwajam/config.hpp"
#include "uwajam/errors.hpp"
#include "uwajam/montecarlo.hpp"
#include "uwajam/sweep.hpp"

namespace {

using uwajam::cli::ResultRow;

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void emit_jsonl(const std::vector<ResultRow>& rows, bool with_axis) {
  for (const auto& r : rows) {
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["engine"] = r.engine;
    j["axis"] = with_axis ? nlohmann::json(r.axis) : nlohmann::json(nullptr);
    j["axis_value"] = with_axis ? num(r.axis_value) : nlohmann::json(nullptr);
    j["metric"] = r.metric;
    j["value"] = num(r.value);
    j["stderr"] = num(r.std_error);
    j["ci_lo"] = num(r.ci_lo);
    j["ci_hi"] = num(r.ci_hi);
    std::cout << j.dump() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage, rate and energy efficiency of jammed underwater acoustic links"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario_name;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool dump = false;

  auto* analyze = app.add_subcommand("analyze", "Analytic metrics as JSON lines");
  analyze->add_option("config", config_path, "Scenario config file")->required();
  analyze->add_option("--scenario", scenario_name, "Section or preset name");
  analyze->add_flag("--dump-config", dump, "Print the effective config instead");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo metrics as JSON lines");
  simulate->add_option("config", config_path, "Scenario config file")->required();
  simulate->add_option("--scenario", scenario_name, "Section or preset name");
  simulate->add_option("--trials,-n", trials, "Number of deployments")->check(CLI::PositiveNumber);
  simulate->add_option("--seed,-s", seed, "Root seed");
  simulate->add_option("--workers,-j", workers, "Worker threads (default UWAJAM_THREADS)");

  std::string sweep_path;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  sweep->add_option("spec", sweep_path, "Sweep spec file")->required();
  sweep->add_option("--out,-o", out_path, "CSV output path")->required();
  sweep->add_option("--workers,-j", workers, "Worker threads (default UWAJAM_THREADS)");

  double threshold_scale = 1.0;
  auto* validate = app.add_subcommand("validate", "Analytic against sampled engines");
  validate->add_option("config", config_path, "Scenario config file")->required();
  validate->add_option("--scenario", scenario_name, "Section or preset name");
  validate->add_option("--trials,-n", trials, "Number of deployments");
  validate->add_option("--seed,-s", seed, "Root seed");
  validate->add_option("--workers,-j", workers, "Worker threads (default UWAJAM_THREADS)");
  validate->add_option("--perturb-threshold", threshold_scale,
                       "Scale the analytic threshold (harness sensitivity check)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const auto scenario = uwajam::cli::load_config(config_path, scenario_name);
      if (dump) {
        std::cout << uwajam::cli::dump_config(scenario);
        return 0;
      }
      emit_jsonl(uwajam::cli::evaluate_cell(scenario, uwajam::cli::Engine::analytic, 0, seed),
                 false);
      return 0;
    }
    if (*simulate) {
      const auto scenario = uwajam::cli::load_config(config_path, scenario_name);
      emit_jsonl(uwajam::cli::evaluate_cell(scenario, uwajam::cli::Engine::montecarlo, trials,
                                            seed, workers),
                 false);
      return 0;
    }
    if (*sweep) {
      const auto spec = uwajam::cli::load_sweep(sweep_path);
      const auto result = uwajam::cli::run_sweep(spec, workers);
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return 2;
      }
      uwajam::cli::write_csv(result.rows, out);
      out.close();
      for (const auto& f : result.failures) {
        std::cerr << "cell failed: " << f.scenario << ' ' << f.engine << ' ' << uwajam::cli::to_string(spec.axis)
                  << '=' << uwajam::cli::format_double(f.axis_value) << ": " << f.message << '\n';
      }
      return result.failures.empty() ? 0 : 1;
    }
    if (*validate) {
      const auto scenario = uwajam::cli::load_config(config_path, scenario_name);
      uwajam::cli::ValidationOptions opt;
      opt.analytic_threshold_scale = threshold_scale;
      opt.workers = workers;
      const auto report = uwajam::cli::validate(scenario, trials, seed, opt);
      uwajam::cli::print_report(report, std::cout);
      return report.passed() ? 0 : 1;
    }
  } catch (const uwajam::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const uwajam::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
