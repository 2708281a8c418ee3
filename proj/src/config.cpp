#include "nvcool/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>

#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        auto k = s.find(sep);
        out.push_back(trim(s.substr(0, k)));
        if (k == std::string_view::npos) break;
        s.remove_prefix(k + 1);
    }
    return out;
}

// shortest round-trip text, exponent without '+' or leading zeros (4e14, 1.5e-06 -> 1.5e-6)
std::string fmt(double v) {
    char buf[40];
    auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    std::string t(buf, end);
    auto e = t.find('e');
    if (e == std::string::npos) return t;
    std::string mant = t.substr(0, e), exp = t.substr(e + 1);
    bool neg = exp[0] == '-';
    if (exp[0] == '+' || exp[0] == '-') exp.erase(0, 1);
    exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
    return mant + "e" + (neg ? "-" : "") + exp;
}

struct UnitScale {
    const char* name;
    double factor;
};

std::vector<UnitScale> units_for(UnitKind u) {
    switch (u) {
        case UnitKind::Rate:
            return {{"rad_s", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
        case UnitKind::Power: return {{"W", 1.0}, {"mW", 1e-3}, {"kW", 1e3}};
        case UnitKind::Temperature: return {{"K", 1.0}, {"mK", 1e-3}};
        case UnitKind::Time: return {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
        case UnitKind::Length: return {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
        case UnitKind::Area: return {{"m2", 1.0}};
        case UnitKind::InverseLength: return {{"1/m", 1.0}};
        case UnitKind::Action: return {{"J_s", 1.0}};
        case UnitKind::Entropy: return {{"J/K", 1.0}};
        case UnitKind::Speed: return {{"m/s", 1.0}};
        case UnitKind::RatePerKelvin: return {{"rad_s/K", 1.0}, {"Hz/K", 1.0}, {"MHz/K", 1e6}};
        case UnitKind::KelvinPerWatt: return {{"K/W", 1.0}};
        case UnitKind::Count:
        case UnitKind::Dimensionless: return {};
    }
    return {};
}

struct Split {
    std::string_view number;
    std::string_view unit;
};

Split split_number_unit(std::string_view s) {
    s = trim(s);
    std::size_t k = 0;
    if (s.substr(0, 3) == "2pi") {
        k = 3;
        while (k < s.size() && (s[k] == ' ' || s[k] == '*')) ++k;
    }
    while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    return {trim(s.substr(0, k)), trim(s.substr(k))};
}

double parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw DomainError("malformed number '" + std::string(s) + "'");
    return v;
}

std::string unit_list(UnitKind u) {
    std::string out;
    for (const auto& s : units_for(u)) out += (out.empty() ? "" : ", ") + std::string(s.name);
    return out;
}

bool parse_bool(std::string_view s) {
    if (s == "on" || s == "true" || s == "yes" || s == "1") return true;
    if (s == "off" || s == "false" || s == "no" || s == "0") return false;
    throw DomainError("expected on/off, got '" + std::string(s) + "'");
}

long parse_count(std::string_view s) {
    double v = parse_quantity(s, UnitKind::Count);
    if (v != std::floor(v) || v < 0 || v > 1e15) throw DomainError("expected a non-negative integer, got '" + std::string(s) + "'");
    return static_cast<long>(v);
}

std::vector<double> parse_quantity_list(std::string_view s, UnitKind u) {
    auto items = split(s, ',');
    std::string_view trailing = split_number_unit(items.back()).unit;
    std::vector<double> out;
    for (auto item : items) {
        Split sp = split_number_unit(item);
        if (sp.number.empty()) throw DomainError("empty list item");
        std::string q(sp.number);
        std::string_view unit = sp.unit.empty() ? trailing : sp.unit;
        if (!unit.empty()) q += " " + std::string(unit);
        out.push_back(parse_quantity(q, u));
    }
    return out;
}

std::string list_text(const std::vector<double>& v, UnitKind u) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : ", ") + fmt(x);
    const char* unit = unit_label(u);
    if (*unit) out += std::string(" ") + unit;
    return out;
}

std::string quantity_text(double v, UnitKind u) {
    const char* unit = unit_label(u);
    return *unit ? fmt(v) + " " + unit : fmt(v);
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
    std::string origin;  // "line N" or "--set ..."
};

const std::vector<std::string> kSections{"run", "params", "schedule", "sweep", "drive", "solver", "output"};

std::vector<Entry> parse_entries(std::string_view text, std::vector<ConfigIssue>& issues) {
    std::vector<Entry> out;
    std::string section = "run";
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string_view::npos) line = trim(line.substr(0, h));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({line_no, "malformed section header '" + std::string(line) + "'"});
                continue;
            }
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (std::find(kSections.begin(), kSections.end(), name) == kSections.end())
                issues.push_back({line_no, "unknown section [" + name + "]"});
            section = name;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, "expected 'key = value', got '" + std::string(line) + "'"});
            continue;
        }
        Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no,
                "line " + std::to_string(line_no)};
        if (e.key.empty() || e.value.empty()) {
            issues.push_back({line_no, "empty key or value"});
            continue;
        }
        out.push_back(std::move(e));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

struct Field {
    std::string section, key;
    Setter set;
};

void set_double(double& dst, std::string_view v, UnitKind u) { dst = parse_quantity(v, u); }

SweepAxis parse_axis(std::string_view s) {
    for (SweepAxis a : {SweepAxis::None, SweepAxis::PumpRate, SweepAxis::Power, SweepAxis::DriveDetuning,
                        SweepAxis::ModeDetuning})
        if (s == axis_label(a)) return a;
    throw DomainError("unknown sweep axis '" + std::string(s) + "' (none, xi, power, drive_detuning, mode_detuning)");
}

UnitKind axis_unit(SweepAxis a) { return a == SweepAxis::Power ? UnitKind::Power : UnitKind::Rate; }

// Sweep values depend on the axis, so they are kept as text until every entry is read.
struct Deferred {
    std::string values, min, max;
    std::string values_origin, min_origin, max_origin;
    int values_line = 0, min_line = 0, max_line = 0;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        {"run", "experiment",
         [](RunConfig& c, std::string_view v) {
             auto names = experiment_names();
             if (std::find(names.begin(), names.end(), v) == names.end())
                 throw DomainError("unknown experiment '" + std::string(v) + "'");
             c.experiment = v;
         }},
        {"run", "models",
         [](RunConfig& c, std::string_view v) {
             c.spec.models.clear();
             for (auto item : split(v, ',')) {
                 ModelName m;
                 if (!parse_model_name(item, m))
                     throw DomainError("unknown model '" + std::string(item) + "' (cumulant, rate, reduced, analytic)");
                 c.spec.models.push_back(m);
             }
         }},
        {"run", "heating", [](RunConfig& c, std::string_view v) { c.spec.heating = parse_bool(v); }},
        {"run", "threads", [](RunConfig& c, std::string_view v) { c.spec.threads = parse_count(v); }},
        {"schedule", "power", [](RunConfig& c, std::string_view v) { set_double(c.spec.power, v, UnitKind::Power); }},
        {"schedule", "t_on", [](RunConfig& c, std::string_view v) { set_double(c.spec.t_on, v, UnitKind::Time); }},
        {"schedule", "t_off", [](RunConfig& c, std::string_view v) { set_double(c.spec.t_off, v, UnitKind::Time); }},
        {"sweep", "axis", [](RunConfig& c, std::string_view v) { c.spec.axis = parse_axis(v); }},
        {"sweep", "points", [](RunConfig& c, std::string_view v) { c.sweep_points = parse_count(v); }},
        {"sweep", "spacing",
         [](RunConfig& c, std::string_view v) {
             if (v != "log" && v != "linear") throw DomainError("spacing must be log or linear");
             c.sweep_log = v == "log";
         }},
        {"sweep", "detuning_span_factor",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.detuning_span_factor, v, UnitKind::Dimensionless); }},
        {"sweep", "mode_detuning_span",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.mode_detuning_span, v, UnitKind::Rate); }},
        {"drive", "powers",
         [](RunConfig& c, std::string_view v) { c.spec.powers = parse_quantity_list(v, UnitKind::Power); }},
        {"drive", "amplitude",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.drive_amplitude, v, UnitKind::Rate); }},
        {"drive", "duration",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.drive_duration, v, UnitKind::Time); }},
        {"drive", "tail", [](RunConfig& c, std::string_view v) { set_double(c.spec.drive_tail, v, UnitKind::Time); }},
        {"solver", "rtol",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.solver.rtol, v, UnitKind::Dimensionless); }},
        {"solver", "atol_pop",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.solver.atol_pop, v, UnitKind::Dimensionless); }},
        {"solver", "atol_photon",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.solver.atol_photon, v, UnitKind::Dimensionless); }},
        {"solver", "atol_other",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.solver.atol_other, v, UnitKind::Dimensionless); }},
        {"solver", "samples_per_phase",
         [](RunConfig& c, std::string_view v) { c.spec.solver.samples_per_phase = parse_count(v); }},
        {"solver", "max_steps", [](RunConfig& c, std::string_view v) { c.spec.solver.max_steps = parse_count(v); }},
        {"solver", "steady_tol",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.steady.tol, v, UnitKind::Dimensionless); }},
        {"solver", "steady_max_time",
         [](RunConfig& c, std::string_view v) { set_double(c.spec.steady.max_time, v, UnitKind::Time); }},
        {"solver", "max_newton",
         [](RunConfig& c, std::string_view v) { c.spec.steady.max_newton = parse_count(v); }},
        {"output", "dir", [](RunConfig& c, std::string_view v) { c.output_dir = v; }},
        {"output", "stem", [](RunConfig& c, std::string_view v) { c.stem = v; }},
        {"output", "format",
         [](RunConfig& c, std::string_view v) {
             if (v != "csv" && v != "json" && v != "both") throw DomainError("format must be csv, json or both");
             c.format = v;
         }},
    };
    return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const Field& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

SweepAxis default_axis(const std::string& experiment) {
    if (experiment == "pump-sweep") return SweepAxis::PumpRate;
    if (experiment == "rabi-splitting") return SweepAxis::DriveDetuning;
    if (experiment == "mode-detuning-sweep") return SweepAxis::ModeDetuning;
    return SweepAxis::None;
}

bool axis_allowed(const std::string& experiment, SweepAxis a) {
    if (experiment == "pump-sweep") return a == SweepAxis::PumpRate || a == SweepAxis::Power;
    return a == default_axis(experiment);
}

RunConfig resolve(const std::vector<Entry>& entries, std::vector<ConfigIssue> issues,
                  std::string_view default_experiment) {
    RunConfig cfg;
    cfg.experiment = default_experiment;
    auto issue = [&](const Entry& e, const std::string& msg) {
        std::string where = e.line > 0 ? "" : e.origin + ": ";
        issues.push_back({e.line, where + msg});
    };

    // the preset decides the baseline for every parameter override
    std::string preset_name = cfg.spec.preset;
    for (const Entry& e : entries)
        if ((e.section == "run") && e.key == "preset") preset_name = e.value;
    try {
        cfg.spec.params = preset(preset_name);
        cfg.spec.preset = preset_name;
    } catch (const DomainError& ex) {
        for (const Entry& e : entries)
            if (e.section == "run" && e.key == "preset") issue(e, ex.what());
    }

    Deferred sweep;
    for (const Entry& e : entries) {
        if (e.section == "run" && e.key == "preset") continue;
        try {
            if (e.section == "params" || e.key.find('.') != std::string::npos) {
                const ParamEntry* p = find_param(e.key);
                if (!p) {
                    issue(e, "unknown parameter key '" + e.key + "'");
                    continue;
                }
                double v = parse_quantity(e.value, p->unit);
                set_param(cfg.spec.params, e.key, v);
                auto it = std::find_if(cfg.overrides.begin(), cfg.overrides.end(),
                                       [&](const auto& o) { return o.first == e.key; });
                if (it != cfg.overrides.end()) cfg.overrides.erase(it);
                cfg.overrides.emplace_back(e.key, v);
                continue;
            }
            if (e.section == "sweep" && (e.key == "values" || e.key == "min" || e.key == "max")) {
                std::string& dst = e.key == "values" ? sweep.values : e.key == "min" ? sweep.min : sweep.max;
                (e.key == "values" ? sweep.values_line : e.key == "min" ? sweep.min_line : sweep.max_line) = e.line;
                (e.key == "values" ? sweep.values_origin : e.key == "min" ? sweep.min_origin : sweep.max_origin) =
                    e.origin;
                dst = e.value;
                continue;
            }
            const Field* f = find_field(e.section, e.key);
            if (!f) {
                issue(e, "unknown key '" + e.key + "' in [" + e.section + "]");
                continue;
            }
            f->set(cfg, e.value);
        } catch (const DomainError& ex) {
            issue(e, "'" + e.key + "': " + ex.what());
        }
    }

    if (cfg.spec.axis == SweepAxis::None) cfg.spec.axis = default_axis(cfg.experiment);
    if (!axis_allowed(cfg.experiment, cfg.spec.axis))
        issues.push_back({0, std::string("sweep axis '") + axis_label(cfg.spec.axis) + "' does not apply to " +
                                 cfg.experiment});
    UnitKind u = axis_unit(cfg.spec.axis);
    auto deferred = [&](const std::string& text, int line, const std::string& origin, auto&& f) {
        if (text.empty()) return;
        try {
            f();
        } catch (const DomainError& ex) {
            issues.push_back({line, (line > 0 ? "" : origin + ": ") + "sweep: " + ex.what()});
        }
    };
    deferred(sweep.values, sweep.values_line, sweep.values_origin,
             [&] { cfg.sweep_values = parse_quantity_list(sweep.values, u); });
    deferred(sweep.min, sweep.min_line, sweep.min_origin, [&] { cfg.sweep_min = parse_quantity(sweep.min, u); });
    deferred(sweep.max, sweep.max_line, sweep.max_origin, [&] { cfg.sweep_max = parse_quantity(sweep.max, u); });
    cfg.sweep_range = !sweep.min.empty() || !sweep.max.empty();
    if (cfg.sweep_range && (sweep.min.empty() || sweep.max.empty()))
        issues.push_back({std::max(sweep.min_line, sweep.max_line), "sweep: min and max must be given together"});
    if (cfg.sweep_range && !sweep.values.empty())
        issues.push_back({0, "sweep: give either values or min/max, not both"});

    if (issues.empty()) {
        try {
            cfg.spec.grid_points = cfg.sweep_points;
            if (!cfg.sweep_values.empty()) {
                cfg.spec.axis_values = cfg.sweep_values;
            } else if (cfg.sweep_range) {
                int n = cfg.sweep_points ? cfg.sweep_points : (cfg.experiment == "pump-sweep" ? 40 : 201);
                cfg.spec.axis_values = cfg.sweep_log ? log_grid(cfg.sweep_min, cfg.sweep_max, n)
                                                     : linear_grid(cfg.sweep_min, cfg.sweep_max, n);
            }
            cfg.spec.validate();
        } catch (const DomainError& ex) {
            issues.push_back({0, ex.what()});
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

}  // namespace

double parse_quantity(std::string_view text, UnitKind u) {
    Split sp = split_number_unit(text);
    std::string_view num = sp.number;
    double scale = 1.0;
    if (num.substr(0, 3) == "2pi") {
        if (u != UnitKind::Rate && u != UnitKind::RatePerKelvin)
            throw DomainError("the 2pi* prefix applies to rates only");
        num.remove_prefix(3);
        num = trim(num);
        if (num.empty() || num.front() != '*') throw DomainError("expected '2pi*<number>'");
        num.remove_prefix(1);
        scale = two_pi;
    }
    double v = parse_number(num);
    auto allowed = units_for(u);
    if (allowed.empty()) {
        if (!sp.unit.empty()) throw DomainError("unexpected unit '" + std::string(sp.unit) + "' on a plain number");
        return scale * v;
    }
    if (sp.unit.empty()) throw DomainError("missing unit (expected " + unit_list(u) + ")");
    for (const auto& s : allowed)
        if (sp.unit == s.name) return scale * v * s.factor;
    throw DomainError("unit mismatch: '" + std::string(sp.unit) + "' (expected " + unit_list(u) + ")");
}

std::vector<std::string> experiment_names() {
    return {"cool-dynamics", "pump-sweep", "rabi-oscillation", "rabi-splitting", "mode-detuning-sweep"};
}

RunConfig parse_config(std::string_view text, std::string_view default_experiment) {
    std::vector<ConfigIssue> issues;
    auto entries = parse_entries(text, issues);
    return resolve(entries, std::move(issues), default_experiment);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets) {
    std::vector<ConfigIssue> issues;
    auto entries = parse_entries(serialize_config(cfg), issues);
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        std::string origin = "--set '" + s + "'";
        if (eq == std::string::npos) {
            issues.push_back({0, origin + ": expected key=value"});
            continue;
        }
        std::string key(trim(std::string_view(s).substr(0, eq)));
        std::string value(trim(std::string_view(s).substr(eq + 1)));
        std::string section = "params";
        if (!find_param(key)) {
            auto dot = key.find('.');
            if (dot == std::string::npos) {
                section = "run";
            } else {
                section = key.substr(0, dot);
                key = key.substr(dot + 1);
            }
        }
        entries.push_back({section, key, value, 0, origin});
    }
    cfg = resolve(entries, std::move(issues), cfg.experiment);
}

std::string serialize_config(const RunConfig& c) { return serialize_config(c, true); }

std::string serialize_config(const RunConfig& c, bool with_output) {
    const ExperimentSpec& s = c.spec;
    std::string out;
    auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    out += "[run]\n";
    line("preset", s.preset);
    line("experiment", c.experiment);
    std::string models;
    for (ModelName m : s.models) models += (models.empty() ? "" : ", ") + std::string(model_label(m));
    line("models", models);
    line("heating", s.heating ? "on" : "off");
    line("threads", std::to_string(s.threads));

    // parameters that differ from the preset, in registry order
    out += "\n[params]\n";
    SystemParams base = preset(s.preset);
    for (const auto& e : param_registry()) {
        double v = get_param(s.params, e.key), b = get_param(base, e.key);
        if (v != b) line(e.key, quantity_text(v, e.unit));
    }

    out += "\n[schedule]\n";
    line("power", quantity_text(s.power, UnitKind::Power));
    line("t_on", quantity_text(s.t_on, UnitKind::Time));
    line("t_off", quantity_text(s.t_off, UnitKind::Time));

    out += "\n[sweep]\n";
    line("axis", axis_label(s.axis));
    UnitKind u = axis_unit(s.axis);
    if (!c.sweep_values.empty()) line("values", list_text(c.sweep_values, u));
    if (c.sweep_range) {
        line("min", quantity_text(c.sweep_min, u));
        line("max", quantity_text(c.sweep_max, u));
        line("spacing", c.sweep_log ? "log" : "linear");
    }
    if (c.sweep_points) line("points", std::to_string(c.sweep_points));
    line("detuning_span_factor", fmt(s.detuning_span_factor));
    line("mode_detuning_span", quantity_text(s.mode_detuning_span, UnitKind::Rate));

    out += "\n[drive]\n";
    line("powers", list_text(s.powers, UnitKind::Power));
    line("amplitude", quantity_text(s.drive_amplitude, UnitKind::Rate));
    line("duration", quantity_text(s.drive_duration, UnitKind::Time));
    line("tail", quantity_text(s.drive_tail, UnitKind::Time));

    out += "\n[solver]\n";
    line("rtol", fmt(s.solver.rtol));
    line("atol_pop", fmt(s.solver.atol_pop));
    line("atol_photon", fmt(s.solver.atol_photon));
    line("atol_other", fmt(s.solver.atol_other));
    line("samples_per_phase", std::to_string(s.solver.samples_per_phase));
    line("max_steps", std::to_string(s.solver.max_steps));
    line("steady_tol", fmt(s.steady.tol));
    line("steady_max_time", quantity_text(s.steady.max_time, UnitKind::Time));
    line("max_newton", std::to_string(s.steady.max_newton));

    if (!with_output) return out;
    out += "\n[output]\n";
    line("dir", c.output_dir);
    if (!c.stem.empty()) line("stem", c.stem);
    line("format", c.format);
    return out;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(serialize_config(cfg, false)); }

ExperimentResult run_experiment(const RunConfig& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "cool-dynamics") return run_cooling_pulse(cfg.spec);
    if (e == "pump-sweep") return run_pump_sweep(cfg.spec);
    if (e == "rabi-oscillation") return run_rabi_oscillation(cfg.spec);
    if (e == "rabi-splitting") return run_rabi_splitting(cfg.spec);
    if (e == "mode-detuning-sweep") return run_mode_detuning_sweep(cfg.spec);
    throw ConfigError({{0, "unknown experiment " + e}});
}

}  // namespace nvcool
