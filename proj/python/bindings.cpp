#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uwajam/analysis.hpp"
#include "uwajam/config.hpp"
#include "uwajam/montecarlo.hpp"
#include "uwajam/sweep.hpp"

namespace py = pybind11;
using namespace uwajam;

namespace {

py::dict summary_dict(const montecarlo::SimulationSummary& s) {
  py::dict d;
  d["coverage"] = s.coverage;
  d["avg_rate_se"] = s.rate_se;
  d["avg_rate_bps"] = s.rate_bps;
  d["ee"] = s.ee;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coverage, rate and energy efficiency of jammed underwater acoustic links";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<MetricEstimate>(m, "MetricEstimate")
      .def_readonly("value", &MetricEstimate::value)
      .def_readonly("stderr", &MetricEstimate::std_error)
      .def_readonly("ci_lo", &MetricEstimate::ci_lo)
      .def_readonly("ci_hi", &MetricEstimate::ci_hi)
      .def_readonly("n", &MetricEstimate::n)
      .def_readonly("quad_error", &MetricEstimate::quad_error)
      .def("__repr__", [](const MetricEstimate& e) {
        return "MetricEstimate(value=" + cli::format_double(e.value) +
               ", stderr=" + cli::format_double(e.std_error) + ")";
      });

  py::class_<uwchannel::EnvironmentConfig>(m, "EnvironmentConfig")
      .def(py::init<>())
      .def_readwrite("frequency_khz", &uwchannel::EnvironmentConfig::frequency_khz)
      .def_readwrite("bandwidth_hz", &uwchannel::EnvironmentConfig::bandwidth_hz)
      .def_readwrite("spreading_factor", &uwchannel::EnvironmentConfig::spreading_factor)
      .def_readwrite("noise_level_db", &uwchannel::EnvironmentConfig::noise_level_db)
      .def_readwrite("noise_decay", &uwchannel::EnvironmentConfig::noise_decay)
      .def_readwrite("source_level_db", &uwchannel::EnvironmentConfig::source_level_db)
      .def_readwrite("depth_km", &uwchannel::EnvironmentConfig::depth_km)
      .def_readwrite("dmax_km", &uwchannel::EnvironmentConfig::dmax_km)
      .def("validate", &uwchannel::EnvironmentConfig::validate);

  py::class_<stochgeom::JammerField>(m, "JammerField")
      .def(py::init<>())
      .def_readwrite("intensity_per_km2", &stochgeom::JammerField::intensity_per_km2)
      .def_readwrite("jam_power", &stochgeom::JammerField::jam_power)
      .def_readwrite("depth_km", &stochgeom::JammerField::depth_km)
      .def_readwrite("trunc_radius_km", &stochgeom::JammerField::trunc_radius_km)
      .def_property(
          "jammer_psi", [](const stochgeom::JammerField& f) { return f.jammer_fading.psi; },
          [](stochgeom::JammerField& f, double psi) { f.jammer_fading.psi = psi; })
      .def("validate", &stochgeom::JammerField::validate);

  py::class_<analysis::LinkConfig>(m, "LinkConfig")
      .def(py::init<>())
      .def_readwrite("tx_power", &analysis::LinkConfig::tx_power)
      .def_readwrite("sjnr_threshold", &analysis::LinkConfig::sjnr_threshold)
      .def_readwrite("static_power", &analysis::LinkConfig::static_power);

  py::class_<analysis::Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("label", &analysis::Scenario::label)
      .def_readwrite("env", &analysis::Scenario::env)
      .def_readwrite("field", &analysis::Scenario::field)
      .def_readwrite("link", &analysis::Scenario::link)
      .def_property_readonly("psi", [](const analysis::Scenario& s) { return s.fading().psi; })
      .def("validate", &analysis::Scenario::validate)
      .def("dump", &cli::dump_config)
      .def("__repr__", [](const analysis::Scenario& s) { return "Scenario('" + s.label + "')"; });

  m.def(
      "preset",
      [](const std::string& depth, double intensity) {
        return analysis::make_preset(analysis::parse_depth(depth), intensity);
      },
      py::arg("depth") = "shallow", py::arg("intensity_per_km2") = 0.01,
      "Default scenario for 'shallow', 'mid' or 'deep' water.");
  m.def("load_config", [](const std::string& path, const std::string& name) {
    return cli::load_config(path, name);
  }, py::arg("path"), py::arg("scenario") = "");
  m.def("load_config_text", &cli::load_config_text, py::arg("text"), py::arg("scenario") = "",
        py::arg("source") = "<string>");

  py::class_<analysis::LinkAnalyzer>(m, "LinkAnalyzer")
      .def(py::init([](const analysis::Scenario& s) { return analysis::LinkAnalyzer(s); }))
      .def("conditional_coverage", &analysis::LinkAnalyzer::conditional_coverage,
           py::call_guard<py::gil_scoped_release>())
      .def("conditional_rate", &analysis::LinkAnalyzer::conditional_rate,
           py::call_guard<py::gil_scoped_release>())
      .def("coverage", &analysis::LinkAnalyzer::coverage, py::call_guard<py::gil_scoped_release>())
      .def("average_rate", &analysis::LinkAnalyzer::average_rate,
           py::call_guard<py::gil_scoped_release>())
      .def("energy_efficiency", &analysis::LinkAnalyzer::energy_efficiency,
           py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("noise_power", &analysis::LinkAnalyzer::noise_power)
      .def_property_readonly("psi", &analysis::LinkAnalyzer::psi);

  m.def("coverage", &analysis::coverage, py::call_guard<py::gil_scoped_release>());
  m.def("average_rate", &analysis::average_rate, py::call_guard<py::gil_scoped_release>());
  m.def("energy_efficiency", &analysis::energy_efficiency, py::call_guard<py::gil_scoped_release>());

  m.def(
      "simulate",
      [](const analysis::Scenario& s, std::uint64_t n_trials, std::uint64_t seed, unsigned workers) {
        montecarlo::TrialPlan plan;
        plan.scenario = s;
        plan.n_trials = n_trials;
        plan.seed = seed;
        plan.workers = workers;
        montecarlo::SimulationSummary out;
        {
          py::gil_scoped_release release;
          out = montecarlo::simulate(plan);
        }
        return summary_dict(out);
      },
      py::arg("scenario"), py::arg("n_trials") = 1000000, py::arg("seed") = 1,
      py::arg("workers") = 0);

  m.def(
      "semianalytic_coverage",
      [](const analysis::Scenario& s, std::uint64_t n_fields, std::uint64_t seed, unsigned workers) {
        py::gil_scoped_release release;
        return analysis::semianalytic_coverage(s, n_fields, numerics::RandomStream(seed, 1), workers);
      },
      py::arg("scenario"), py::arg("n_fields") = 100000, py::arg("seed") = 1, py::arg("workers") = 0);

  m.def(
      "sweep_csv",
      [](const std::string& spec_text, unsigned workers) {
        const auto spec = cli::load_sweep_text(spec_text);
        cli::SweepResult res;
        {
          py::gil_scoped_release release;
          res = cli::run_sweep(spec, workers);
        }
        py::list failures;
        for (const auto& f : res.failures) failures.append(f.message);
        return py::make_tuple(cli::to_csv(res.rows), failures);
      },
      py::arg("spec_text"), py::arg("workers") = 0,
      "Runs a sweep given as spec text; returns (csv_text, failure_messages).");

  m.def(
      "validate",
      [](const analysis::Scenario& s, std::uint64_t n_trials, std::uint64_t seed,
         double threshold_scale) {
        cli::ValidationOptions opt;
        opt.analytic_threshold_scale = threshold_scale;
        cli::ValidationReport rep;
        {
          py::gil_scoped_release release;
          rep = cli::validate(s, n_trials, seed, opt);
        }
        py::list rows;
        for (const auto& e : rep.entries) {
          py::dict d;
          d["metric"] = e.metric;
          d["engine"] = e.engine;
          d["analytic"] = e.analytic;
          d["sampled"] = e.sampled;
          d["combined_se"] = e.combined_se;
          d["z"] = e.z;
          d["passed"] = e.passed;
          rows.append(d);
        }
        return py::make_tuple(rep.passed(), rows);
      },
      py::arg("scenario"), py::arg("n_trials") = 100000, py::arg("seed") = 1,
      py::arg("threshold_scale") = 1.0);

  m.def("absorption_db_per_km", &uwchannel::absorption_db_per_km);
  m.def("pathloss_db", &uwchannel::pathloss_db);
  m.def("noise_power", &uwchannel::noise_power);
  m.def("marcum_q1", &numerics::marcum_q1);
  m.def(
      "lt_fading",
      [](std::complex<double> s, double psi, double kappa) {
        return uwchannel::lt_fading(s, {psi}, kappa);
      },
      py::arg("s"), py::arg("psi"), py::arg("kappa") = 1.0);
  m.def(
      "lt_interference",
      [](std::complex<double> s, const analysis::Scenario& sc) {
        return stochgeom::lt_interference(s, sc.field, sc.env);
      },
      py::arg("s"), py::arg("scenario"));
}
