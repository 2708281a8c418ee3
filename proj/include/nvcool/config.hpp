#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvcool/experiments.hpp"

namespace nvcool {

// Line-oriented run configuration:
//
//   [run]       preset, experiment, models, heating, threads
//   [params]    dotted parameter keys (resonator.kappa = 1.88e6 rad_s)
//   [schedule]  power, t_on, t_off, samples_per_phase
//   [sweep]     axis, values | (min, max, points, spacing), detuning_span_factor, mode_detuning_span
//   [drive]     powers, amplitude, duration, tail
//   [solver]    rtol, atol_pop, atol_photon, atol_other, max_steps, steady_tol, steady_max_time, max_newton
//   [output]    dir, stem, format
//
// Dotted parameter keys are also accepted outside [params]. Quantities carry a
// unit suffix; rates accept rad_s or Hz (same internal angular unit, with
// kHz/MHz/GHz scaling) and a "2pi*" prefix on the number.
struct RunConfig {
    std::string experiment = "cool-dynamics";
    ExperimentSpec spec;
    std::vector<std::pair<std::string, double>> overrides;  // in file order, resolved to internal units

    // sweep grid as written; resolved into spec.axis_values by resolve_sweep
    std::vector<double> sweep_values;
    double sweep_min = 0.0, sweep_max = 0.0;
    int sweep_points = 0;
    bool sweep_log = true;
    bool sweep_range = false;

    std::string output_dir = ".";
    std::string stem;  // default: experiment name
    std::string format = "both";  // csv | json | both
};

std::vector<std::string> experiment_names();

// Collects every issue before throwing ConfigError.
RunConfig parse_config(std::string_view text, std::string_view default_experiment = "cool-dynamics");

// Applies "key=value" overrides (same syntax as a config line; section.key
// addresses non-parameter fields, e.g. "schedule.power=1 W").
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets);

// Canonical config text; parse_config(serialize_config(c)) serializes identically.
std::string serialize_config(const RunConfig& cfg);
std::string serialize_config(const RunConfig& cfg, bool with_output);
// Hash of the canonical text without [output], so the destination does not change it.
std::string config_hash(const RunConfig& cfg);

// Dispatches on cfg.experiment.
ExperimentResult run_experiment(const RunConfig& cfg);

// Parses "<number> <unit>" for the given unit kind; throws DomainError.
double parse_quantity(std::string_view text, UnitKind unit);

}  // namespace nvcool
