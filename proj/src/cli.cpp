#include "nvcool/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nvcool/config.hpp"
#include "nvcool/errors.hpp"
#include "nvcool/experiments.hpp"
#include "nvcool/oracle_suite.hpp"
#include "nvcool/output.hpp"

namespace nvcool {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError({{0, "cannot read config file " + path}});
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct RunOptions {
    std::string config;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string format;
    bool quiet = false;
};

int run_subcommand(const std::string& name, const RunOptions& o, std::ostream& out) {
    RunConfig cfg = o.config.empty() ? parse_config("", name) : parse_config(read_file(o.config), name);
    if (cfg.experiment != name)
        throw ConfigError({{0, "config names experiment '" + cfg.experiment + "' but the subcommand is " + name}});
    std::vector<std::string> sets = o.sets;
    if (!o.out_dir.empty()) sets.push_back("output.dir=" + o.out_dir);
    if (!o.format.empty()) sets.push_back("output.format=" + o.format);
    if (!sets.empty()) apply_overrides(cfg, sets);

    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult r = run_experiment(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::string> paths;
    try {
        paths = emit(r, cfg, wall);
    } catch (const Error& ex) {
        throw ConfigError({{0, ex.what()}});
    }
    if (!o.quiet) {
        out << r.experiment << " (config " << config_hash(cfg) << ", " << fmt(wall) << " s)\n";
        for (const auto& [k, v] : r.summary) out << "  " << k << " = " << fmt(v) << "\n";
        for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
        for (const auto& p : paths) out << "  wrote " << p << "\n";
    }
    return kExitOk;
}

int oracle_check(const std::string& preset_name, const std::vector<std::string>& sets, std::ostream& out) {
    RunConfig cfg = parse_config("preset = " + preset_name);
    if (!sets.empty()) apply_overrides(cfg, sets);
    auto checks = run_oracle_suite(cfg.spec.params);
    bool ok = true;
    double worst = 0.0;
    for (const OracleCheck& c : checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %-30s max rel dev %.3e (gate %.0e, %.1f s)", c.passed() ? "PASS" : "FAIL",
                      c.name.c_str(), c.deviation, c.gate, c.wall_time_s);
        out << buf << "\n    " << c.detail << "\n";
        ok = ok && c.passed();
        worst = std::max(worst, c.deviation / c.gate);
    }
    out << (ok ? "all oracle gates passed" : "oracle gates failed") << " (worst deviation/gate " << fmt(worst)
        << ")\n";
    return ok ? kExitOk : kExitNumerical;
}

int params_show(const std::string& preset_name, const std::vector<std::string>& sets, std::ostream& out) {
    RunConfig cfg = parse_config("preset = " + preset_name);
    if (!sets.empty()) apply_overrides(cfg, sets);
    const SystemParams& p = cfg.spec.params;
    out << "# preset " << cfg.spec.preset << " (params hash " << params_hash(p) << ")\n";
    for (const auto& e : param_registry()) {
        char buf[160];
        char num[32];
        *std::to_chars(num, num + sizeof num - 1, get_param(p, e.key)).ptr = '\0';
        std::snprintf(buf, sizeof buf, "%-28s %-24s %-8s", e.key.c_str(), num, unit_label(e.unit));
        std::string note = provenance_note(cfg.spec.preset, e.key);
        for (const auto& [k, v] : cfg.overrides)
            if (k == e.key) note = "override";
        out << buf << (note.empty() ? "" : "  # " + note) << "\n";
    }
    out << "# derived: n_th = " << fmt(p.thermal_photons()) << ", xi(1 W) = "
        << fmt(pump_rate_from_power(1.0, p.optics, p.constants)) << " rad_s\n";
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optical cooling of a microwave mode by an NV spin ensemble", "nvcool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunOptions ro;
    std::string which;
    for (const std::string& name : experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("-c,--config", ro.config, "run configuration file");
        sub->add_option("-s,--set", ro.sets, "override, key=value (repeatable)");
        sub->add_option("-o,--out", ro.out_dir, "output directory");
        sub->add_option("-f,--format", ro.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
        sub->add_flag("-q,--quiet", ro.quiet, "no summary on stdout");
        sub->callback([&which, name] { which = name; });
    }
    std::string preset_name = "high-frequency";
    std::vector<std::string> sets;
    CLI::App* oracle = app.add_subcommand("oracle-check", "compare the cumulant model with the exact master equation");
    oracle->add_option("-p,--preset", preset_name, "parameter preset");
    oracle->add_option("-s,--set", sets, "parameter override, key=value (repeatable)");
    oracle->callback([&] { which = "oracle-check"; });
    CLI::App* params = app.add_subcommand("params", "inspect parameter presets");
    CLI::App* show = params->add_subcommand("show", "print the resolved parameter table");
    params->require_subcommand(1);
    show->add_option("preset", preset_name, "preset name");
    show->add_option("-s,--set", sets, "parameter override, key=value (repeatable)");
    show->callback([&] { which = "params-show"; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (which == "oracle-check") return oracle_check(preset_name, sets, out);
        if (which == "params-show") return params_show(preset_name, sets, out);
        return run_subcommand(which, ro, out);
    } catch (const ConfigError& e) {
        err << "configuration error:\n";
        for (const ConfigIssue& i : e.issues())
            err << "  " << (i.line > 0 ? "line " + std::to_string(i.line) + ": " : "") << i.message << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const IntegrationError& e) {
        err << "integration failed at t = " << e.time() << " s: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace nvcool
