#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvcool/integrate.hpp"
#include "nvcool/params.hpp"
#include "nvcool/units.hpp"

namespace nvcool {

struct DickeState {
    double J_avg = 0.0;
    double M_avg = 0.0;
    double p = 0.0;   // upper share pop33 / (pop11 + pop33)
    double J0 = 0.0;  // N / 2
    bool clamped = false;  // J(J+1) came out negative and was set to zero
};

DickeState dicke_numbers(double pop11, double pop33, double n_spins);
double collective_coupling(double J, double g);  // sqrt(2J) g

// Interior local maxima whose prominence is at least rel_prominence times the
// range of y, in ascending index order.
std::vector<std::size_t> find_peaks(const std::vector<double>& y, double rel_prominence = 0.01);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(std::string_view col) const;
};

struct ExperimentResult {
    std::string experiment;
    SystemParams params;  // resolved: preset, overrides and (at spec.power) heating
    std::vector<Table> tables;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> warnings;

    const Table& table(std::string_view name) const;
    double summary_value(std::string_view key) const;
    void warn(const std::string& w);  // ignores duplicates
};

enum class ModelName { Cumulant, Rate, Reduced, Analytic };
const char* model_label(ModelName m);
bool parse_model_name(std::string_view s, ModelName& out);

enum class SweepAxis { None, PumpRate, Power, DriveDetuning, ModeDetuning };
const char* axis_label(SweepAxis a);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

struct ExperimentSpec {
    std::string preset = "high-frequency";
    SystemParams params = nvcool::preset("high-frequency");
    bool heating = false;
    std::vector<ModelName> models{ModelName::Cumulant, ModelName::Rate};

    // laser pulse
    double power = 2.0;  // W
    double t_on = 20e-3;
    double t_off = 20e-3;

    // sweeps; empty axis_values selects the default grid of the experiment
    SweepAxis axis = SweepAxis::None;
    std::vector<double> axis_values;
    int grid_points = 0;            // 0: 40 for pump sweeps, 201 for detuning sweeps
    double detuning_span_factor = 5.0;  // splitting grid half-width in units of the largest sqrt(2J) g
    double mode_detuning_span = two_pi * 20e6;

    // microwave drive
    std::vector<double> powers{0.01, 0.3, 1.0, 10.0};  // W
    double drive_amplitude = two_pi * 9.7e5;
    double drive_duration = 5e-6;
    double drive_tail = 5e-6;

    SolverSettings solver;
    SteadyStateOptions steady;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

ExperimentResult run_cooling_pulse(const ExperimentSpec& spec);
ExperimentResult run_pump_sweep(const ExperimentSpec& spec);
ExperimentResult run_rabi_oscillation(const ExperimentSpec& spec);
ExperimentResult run_rabi_splitting(const ExperimentSpec& spec);
ExperimentResult run_mode_detuning_sweep(const ExperimentSpec& spec);

}  // namespace nvcool
