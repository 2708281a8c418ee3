#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "nvcool/cumulant.hpp"
#include "nvcool/params.hpp"
#include "nvcool/rodas.hpp"

namespace nvcool {

enum class ModelKind { Cumulant, DrivenCumulant, Rate, Reduced };

const char* model_name(ModelKind k);
int state_size(ModelKind k);

struct SolverSettings {
    double rtol = 1e-8;
    double atol_pop = 1e-12;
    double atol_photon = 1e-6;
    double atol_other = 1e-12;
    int samples_per_phase = 1000;
    long max_steps = 20'000'000;

    void validate() const;
};

// Piecewise-constant pump rate; phases follow each other from t = 0.
struct Phase {
    double duration = 0.0;
    double xi = 0.0;
};

struct Schedule {
    std::vector<Phase> phases;

    static Schedule constant(double xi, double duration);
    static Schedule pulse(double xi_on, double t_on, double t_off);
    double total() const;
};

struct Model {
    ModelKind kind = ModelKind::Cumulant;
    SystemParams params;
    DriveParams drive;  // DrivenCumulant only
};

// Thermal start: pop = (1/3, 1/3, 1/3, 0...), photon_n = n_th, correlations zero.
Eigen::VectorXd initial_state(const Model& m);

// Photon number and the seven populations of a packed state.
double state_photon_number(ModelKind k, const Eigen::VectorXd& y);
std::array<double, 7> state_populations(const Model& m, double xi, const Eigen::VectorXd& y);

struct Trajectory {
    ModelKind kind = ModelKind::Cumulant;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<double> photon_n;
    std::vector<double> T_eff;
    std::vector<std::array<double, 7>> pop;
    std::string params_hash;
    SolverSettings solver;
    StepStats stats;
    double max_pop_sum_error = 0.0;
    std::vector<std::string> warnings;

    MomentState moment(std::size_t i) const;
    DrivenMomentState driven(std::size_t i) const;
};

// Integrates through every phase; steps land exactly on phase boundaries and
// on the drive window edges. Each phase is sampled at samples_per_phase
// uniform points from the dense output.
Trajectory integrate(const Model& m, const Eigen::VectorXd& y0, const Schedule& schedule,
                     const SolverSettings& solver = {});

// Plain evolution to t without sampling (pump rate from m.params).
Eigen::VectorXd evolve_to(const Model& m, const Eigen::VectorXd& y0, double duration,
                          const SolverSettings& solver = {}, StepStats* stats = nullptr);

struct SteadyStateOptions {
    double max_time = 100.0;  // s of simulated time before giving up
    double tol = 1e-10;       // residual relative to the rate scale
    int max_newton = 40;
    bool newton_first = false;  // try Newton from the guess before integrating
};

struct SteadyStateResult {
    Eigen::VectorXd state;
    double residual = 0.0;
    double rate_scale = 0.0;
    double t_integrated = 0.0;
    bool newton_converged = false;
    std::vector<std::string> warnings;
};

// Scaled residual max_i |f_i| / max(|y_i|, 1) divided by the rate scale.
double steady_residual(const Model& m, const Eigen::VectorXd& y);
double rate_scale(const Model& m);

// Long-time integration over ten times the slowest relaxation time followed
// by a damped Newton polish; repeats with longer horizons if needed.
SteadyStateResult steady_state(const Model& m, const Eigen::VectorXd& guess,
                               const SolverSettings& solver = {},
                               const SteadyStateOptions& opts = {});

void evaluate_rhs(const Model& m, double xi, double eps, const Eigen::VectorXd& y, Eigen::VectorXd& dy);

}  // namespace nvcool
