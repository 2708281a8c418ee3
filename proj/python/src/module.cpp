#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nvcool/cli.hpp"
#include "nvcool/config.hpp"
#include "nvcool/experiments.hpp"
#include "nvcool/integrate.hpp"
#include "nvcool/output.hpp"
#include "nvcool/params.hpp"
#include "nvcool/units.hpp"

namespace py = pybind11;
using namespace nvcool;

namespace {

SystemParams resolve_params(const std::string& preset_name, const std::map<std::string, double>& overrides) {
    SystemParams p = preset(preset_name);
    for (const auto& [k, v] : overrides) set_param(p, k, v);
    p.validate();
    return p;
}

ModelKind model_kind(const std::string& name) {
    if (name == "cumulant") return ModelKind::Cumulant;
    if (name == "rate") return ModelKind::Rate;
    if (name == "reduced") return ModelKind::Reduced;
    throw DomainError("unknown model '" + name + "' (cumulant, rate, reduced)");
}

py::dict result_dict(const ExperimentResult& r, const RunConfig& cfg) {
    py::dict summary;
    for (const auto& [k, v] : r.summary) summary[py::str(k)] = v;
    py::dict tables;
    for (const Table& t : r.tables) {
        py::dict cols;
        for (const std::string& c : t.columns) {
            std::vector<double> v = t.column(c);
            cols[py::str(c)] = py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
        }
        tables[py::str(t.name)] = cols;
    }
    py::dict out;
    out["experiment"] = r.experiment;
    out["summary"] = summary;
    out["tables"] = tables;
    out["warnings"] = r.warnings;
    out["params_hash"] = params_hash(r.params);
    out["config_text"] = serialize_config(cfg, false);
    out["config_hash"] = config_hash(cfg);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin-refrigerator cooling models for a microwave mode coupled to optically pumped NV centres";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "NvcoolError", PyExc_RuntimeError);
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<MasingThresholdError>(m, "MasingThresholdError", domain.ptr());
    py::register_exception<DegenerateRatesError>(m, "DegenerateRatesError", domain.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def("thermal_photon_number",
          [](double omega, double T) { return thermal_photon_number(omega, T); },
          py::arg("omega"), py::arg("T"), "Bose occupation at angular frequency omega (rad/s) and T (K).");
    m.def("effective_temperature", [](double omega, double n) { return effective_temperature(omega, n); },
          py::arg("omega"), py::arg("n"));
    m.def("pump_rate_from_power",
          [](double P, const std::string& p) { return pump_rate_from_power(P, preset(p).optics, preset(p).constants); },
          py::arg("power"), py::arg("preset") = "high-frequency");
    m.def("power_from_pump_rate",
          [](double xi, const std::string& p) { return power_from_pump_rate(xi, preset(p).optics, preset(p).constants); },
          py::arg("xi"), py::arg("preset") = "high-frequency");

    m.def("preset_names", &preset_names);
    m.def("experiment_names", &experiment_names);
    m.def(
        "params",
        [](const std::string& name, const std::map<std::string, double>& overrides) {
            SystemParams p = resolve_params(name, overrides);
            std::map<std::string, std::pair<double, std::string>> out;
            for (const auto& e : param_registry()) out[e.key] = {get_param(p, e.key), unit_label(e.unit)};
            return out;
        },
        py::arg("preset") = "high-frequency", py::arg("overrides") = std::map<std::string, double>{},
        "Resolved parameters as {key: (value, unit)} in internal units.");

    m.def(
        "dicke_numbers",
        [](double pop11, double pop33, double n_spins) {
            DickeState d = dicke_numbers(pop11, pop33, n_spins);
            py::dict out;
            out["J"] = d.J_avg;
            out["M"] = d.M_avg;
            out["p"] = d.p;
            out["J0"] = d.J0;
            out["clamped"] = d.clamped;
            return out;
        },
        py::arg("pop11"), py::arg("pop33"), py::arg("n_spins"));
    m.def("collective_coupling", &collective_coupling, py::arg("J"), py::arg("g"));

    m.def(
        "steady_photon_number",
        [](const std::string& preset_name, double power, const std::string& model,
           const std::map<std::string, double>& overrides) {
            SystemParams p = resolve_params(preset_name, overrides);
            p.rates.xi = pump_rate_from_power(power, p.optics, p.constants);
            Model mdl{model_kind(model), p, {}};
            py::gil_scoped_release nogil;
            return state_photon_number(mdl.kind, steady_state(mdl, initial_state(mdl)).state);
        },
        py::arg("preset") = "high-frequency", py::arg("power") = 2.0, py::arg("model") = "cumulant",
        py::arg("overrides") = std::map<std::string, double>{});

    m.def(
        "run",
        [](const std::string& experiment, const std::string& config, const std::vector<std::string>& sets) {
            RunConfig cfg = parse_config(config, experiment);
            if (cfg.experiment != experiment)
                throw ConfigError({{0, "config names experiment '" + cfg.experiment + "', not " + experiment}});
            if (!sets.empty()) apply_overrides(cfg, sets);
            ExperimentResult r;
            {
                py::gil_scoped_release nogil;
                r = run_experiment(cfg);
            }
            return result_dict(r, cfg);
        },
        py::arg("experiment"), py::arg("config") = "", py::arg("set") = std::vector<std::string>{},
        "Runs an experiment from config text plus 'key=value' overrides; returns summary, tables and warnings.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = cli_main(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr).");
}
