#include "nvcool/integrate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nvcool/errors.hpp"
#include "nvcool/rate_model.hpp"

namespace nvcool {

const char* model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Cumulant: return "cumulant";
        case ModelKind::DrivenCumulant: return "driven-cumulant";
        case ModelKind::Rate: return "rate";
        case ModelKind::Reduced: return "reduced";
    }
    return "";
}

int state_size(ModelKind k) {
    switch (k) {
        case ModelKind::Cumulant: return MomentState::size;
        case ModelKind::DrivenCumulant: return DrivenMomentState::size;
        case ModelKind::Rate: return 8;
        case ModelKind::Reduced: return 4;
    }
    return 0;
}

void SolverSettings::validate() const {
    if (!(rtol > 0.0 && rtol <= 1e-2)) throw DomainError("solver rtol must lie in (0, 1e-2]");
    if (!(atol_pop > 0.0) || !(atol_photon > 0.0) || !(atol_other > 0.0))
        throw DomainError("solver absolute tolerances must be positive");
    if (samples_per_phase < 1) throw DomainError("samples_per_phase must be >= 1");
}

Schedule Schedule::constant(double xi, double duration) { return Schedule{{{duration, xi}}}; }

Schedule Schedule::pulse(double xi_on, double t_on, double t_off) {
    return Schedule{{{t_on, xi_on}, {t_off, 0.0}}};
}

double Schedule::total() const {
    double t = 0.0;
    for (const auto& p : phases) t += p.duration;
    return t;
}

namespace {

int n_pops(ModelKind k) { return k == ModelKind::Reduced ? 3 : 7; }
int photon_index(ModelKind k) { return k == ModelKind::Reduced ? 3 : 7; }

// Autonomous right-hand side for one segment (fixed pump rate and drive).
struct SegmentSystem {
    ModelKind kind;
    CumulantKernel kernel;
    double eps = 0.0, det_spin = 0.0, det_mode = 0.0;
    // rate-model pieces
    Eigen::Matrix<double, 7, 7> R;
    TildeRates tilde;
    NvRates rates;
    double keet = 0.0, kappa = 0.0, nth = 0.0, n_spins = 0.0;

    SegmentSystem(const Model& m, double xi, double eps_)
        : kind(m.kind), kernel(with_xi(m.params, xi)), eps(eps_) {
        SystemParams p = with_xi(m.params, xi);
        det_spin = m.drive.detuning_spin;
        det_mode = m.drive.detuning_mode;
        R = population_rate_matrix(p.rates);
        tilde = tilde_rates(xi, p.rates);
        rates = p.rates;
        keet = k_eet(p.resonator.g31, ComplexDetuning::transition_31(p));
        kappa = p.resonator.kappa;
        nth = p.thermal_photons();
        n_spins = p.resonator.n_spins;
    }

    static SystemParams with_xi(SystemParams p, double xi) {
        p.rates.xi = xi;
        return p;
    }

    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        switch (kind) {
            case ModelKind::Cumulant: kernel.undriven(y.data(), dy.data()); return;
            case ModelKind::DrivenCumulant: kernel.driven(y.data(), dy.data(), eps, det_spin, det_mode); return;
            case ModelKind::Rate: {
                Eigen::Map<const Eigen::Matrix<double, 7, 1>> p(y.data());
                Eigen::Map<Eigen::Matrix<double, 7, 1>> dp(dy.data());
                dp.noalias() = R * p;
                double n = y[7];
                double flow = keet * (y[2] * (1.0 + n) - y[0] * n);
                dp[0] += flow;
                dp[2] -= flow;
                dy[7] = kappa * (nth - n) + n_spins * flow;
                return;
            }
            case ModelKind::Reduced: {
                const TildeRates& kt = tilde;
                double p1 = y[0], p2 = y[1], p3 = y[2], n = y[3];
                double flow = keet * (p3 * (1.0 + n) - p1 * n);
                dy[0] = -(kt(1, 1) + rates.k12 + rates.k13) * p1 + (kt(2, 1) + rates.k21) * p2 +
                        (kt(3, 1) + rates.k31) * p3 + flow;
                dy[1] = -(kt(2, 2) + rates.k21) * p2 + (kt(1, 2) + rates.k12) * p1 + kt(3, 2) * p3;
                dy[2] = -(kt(3, 3) + rates.k31) * p3 + (kt(1, 3) + rates.k13) * p1 + kt(2, 3) * p2 - flow;
                dy[3] = kappa * (nth - n) + n_spins * flow;
                return;
            }
        }
    }
};

Eigen::VectorXd atol_vector(ModelKind k, const SolverSettings& s) {
    Eigen::VectorXd a = Eigen::VectorXd::Constant(state_size(k), s.atol_other);
    for (int i = 0; i < n_pops(k); ++i) a[i] = s.atol_pop;
    a[photon_index(k)] = s.atol_photon;
    return a;
}

RodasOptions rodas_options(const SolverSettings& s) {
    RodasOptions o;
    o.rtol = s.rtol;
    o.max_steps = s.max_steps;
    return o;
}

void check_state(const Model& m, const Eigen::VectorXd& y) {
    if (y.size() != state_size(m.kind))
        throw DomainError(std::string("state size does not match model ") + model_name(m.kind));
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (!std::isfinite(y[i])) throw IntegrationError("non-finite initial state", 0.0);
}

double pop_sum(ModelKind k, const Eigen::VectorXd& y) {
    double s = 0.0;
    for (int i = 0; i < n_pops(k); ++i) s += y[i];
    return s;
}

}  // namespace

void evaluate_rhs(const Model& m, double xi, double eps, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(y.size());
    SegmentSystem(m, xi, eps)(y, dy);
}

Eigen::VectorXd initial_state(const Model& m) {
    MomentState th = MomentState::thermal(m.params);
    switch (m.kind) {
        case ModelKind::Cumulant: return th.pack();
        case ModelKind::DrivenCumulant: return DrivenMomentState::embed(th).pack();
        case ModelKind::Rate: {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(8);
            y.head(3).setConstant(1.0 / 3.0);
            y[7] = th.photon_n;
            return y;
        }
        case ModelKind::Reduced: {
            Eigen::VectorXd y(4);
            y << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, th.photon_n;
            return y;
        }
    }
    return {};
}

double state_photon_number(ModelKind k, const Eigen::VectorXd& y) { return y[photon_index(k)]; }

std::array<double, 7> state_populations(const Model& m, double xi, const Eigen::VectorXd& y) {
    if (m.kind == ModelKind::Reduced) return reduced_full_populations({y[0], y[1], y[2]}, xi, m.params.rates);
    std::array<double, 7> p{};
    for (int i = 0; i < 7; ++i) p[i] = y[i];
    return p;
}

MomentState Trajectory::moment(std::size_t i) const {
    if (kind != ModelKind::Cumulant && kind != ModelKind::DrivenCumulant)
        throw DomainError("trajectory does not hold cumulant states");
    return MomentState::unpack(states.at(i).head(MomentState::size));
}

DrivenMomentState Trajectory::driven(std::size_t i) const {
    if (kind != ModelKind::DrivenCumulant) throw DomainError("trajectory does not hold driven states");
    return DrivenMomentState::unpack(states.at(i));
}

Trajectory integrate(const Model& m, const Eigen::VectorXd& y0, const Schedule& schedule,
                     const SolverSettings& solver) {
    solver.validate();
    m.params.validate();
    check_state(m, y0);
    if (m.kind == ModelKind::DrivenCumulant) m.drive.validate(m.params);
    for (const auto& ph : schedule.phases)
        if (!(ph.duration > 0.0) || !(ph.xi >= 0.0) || !std::isfinite(ph.duration) || !std::isfinite(ph.xi))
            throw DomainError("schedule phases need positive duration and non-negative pump rate");

    // segments: phase boundaries plus drive window edges
    struct Segment {
        double t0, t1, xi;
        bool drive_on;
    };
    std::vector<Segment> segs;
    double t = 0.0;
    for (const auto& ph : schedule.phases) {
        double a = t, b = t + ph.duration;
        std::vector<double> cuts{a};
        if (m.kind == ModelKind::DrivenCumulant) {
            for (double e : {m.drive.t_start, m.drive.t_stop})
                if (e > a && e < b) cuts.push_back(e);
        }
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            bool on = m.kind == ModelKind::DrivenCumulant && m.drive.active(mid);
            segs.push_back({cuts[i], cuts[i + 1], ph.xi, on});
        }
        t = b;
    }

    Trajectory tr;
    tr.kind = m.kind;
    tr.params_hash = params_hash(m.params);
    tr.solver = solver;
    const Eigen::VectorXd atol = atol_vector(m.kind, solver);
    const RodasOptions opt = rodas_options(solver);
    const double omega_m = m.params.resonator.omega_m;

    auto record = [&](double tt, const Eigen::VectorXd& y, double xi) {
        tr.times.push_back(tt);
        tr.states.push_back(y);
        double n = state_photon_number(m.kind, y);
        tr.photon_n.push_back(n);
        tr.T_eff.push_back(n > 0.0 ? effective_temperature(omega_m, n, m.params.constants)
                                   : std::numeric_limits<double>::quiet_NaN());
        tr.pop.push_back(state_populations(m, xi, y));
        tr.max_pop_sum_error = std::max(tr.max_pop_sum_error, std::abs(pop_sum(m.kind, y) - 1.0));
    };

    Eigen::VectorXd y = y0;
    record(0.0, y, segs.empty() ? 0.0 : segs.front().xi);
    for (const auto& sg : segs) {
        double eps = sg.drive_on ? m.drive.rate(m.params.resonator.kappa) : 0.0;
        SegmentSystem sys(m, sg.xi, eps);
        DenseFdSolver<double, SegmentSystem> lin(sys);
        const int ns = solver.samples_per_phase;
        const double dt = (sg.t1 - sg.t0) / ns;
        int next = 1;
        auto obs = [&](const DenseStep<double>& ds) {
            double tend = ds.t0 + ds.h;
            while (next <= ns) {
                double ts = next == ns ? sg.t1 : sg.t0 + next * dt;
                bool last = next == ns;
                if (!last && ts > tend) break;
                if (last && tend < sg.t1) break;
                record(ts, last ? *ds.y1 : ds(ts), sg.xi);
                ++next;
            }
        };
        tr.stats += rodas_integrate<double>(sys, lin, y, sg.t0, sg.t1, atol, opt, obs);
        if (next <= ns) record(sg.t1, y, sg.xi);
    }
    return tr;
}

Eigen::VectorXd evolve_to(const Model& m, const Eigen::VectorXd& y0, double duration,
                          const SolverSettings& solver, StepStats* stats) {
    check_state(m, y0);
    Eigen::VectorXd y = y0;
    double eps = m.kind == ModelKind::DrivenCumulant ? m.drive.rate(m.params.resonator.kappa) : 0.0;
    SegmentSystem sys(m, m.params.rates.xi, eps);
    DenseFdSolver<double, SegmentSystem> lin(sys);
    StepStats st = rodas_integrate<double>(sys, lin, y, 0.0, duration, atol_vector(m.kind, solver),
                                           rodas_options(solver), [](const DenseStep<double>&) {});
    if (stats) *stats += st;
    return y;
}

double rate_scale(const Model& m) {
    return 0.5 * m.params.resonator.kappa + coherence_decay_13(m.params.rates);
}

namespace {

double scaled_residual(const SegmentSystem& sys, const Eigen::VectorXd& y, double scale) {
    Eigen::VectorXd f(y.size());
    sys(y, f);
    double r = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) r = std::max(r, std::abs(f[i]) / std::max(std::abs(y[i]), 1.0));
    return r / scale;
}

Eigen::MatrixXd fd_jacobian(const SegmentSystem& sys, const Eigen::VectorXd& y) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd J(n, n);
    Eigen::VectorXd yp = y, fp(n), fm(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = 1e-6 * std::max(1.0, std::abs(y[j]));
        yp[j] = y[j] + d;
        sys(yp, fp);
        yp[j] = y[j] - d;
        sys(yp, fm);
        yp[j] = y[j];
        J.col(j) = (fp - fm) / (2.0 * d);
    }
    return J;
}

// Linear invariants: population sum, and for the driven set the sum of the
// pop-pop covariance.
Eigen::MatrixXd invariant_rows(ModelKind k, Eigen::VectorXd& targets) {
    const int n = state_size(k);
    int rows = k == ModelKind::DrivenCumulant ? 2 : 1;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(rows, n);
    targets = Eigen::VectorXd::Zero(rows);
    for (int i = 0; i < n_pops(k); ++i) L(0, i) = 1.0;
    targets[0] = 1.0;
    if (k == ModelKind::DrivenCumulant) {
        for (int i = 0; i < 7; ++i)
            for (int j = i; j < 7; ++j)
                L(1, DrivenMomentState::i_cov + DrivenMomentState::cov_index(i, j)) = i == j ? 1.0 : 2.0;
    }
    return L;
}

bool newton_polish(const SegmentSystem& sys, ModelKind kind, Eigen::VectorXd& y, double scale,
                   double tol, int max_iter, double& residual) {
    Eigen::VectorXd targets;
    Eigen::MatrixXd L = invariant_rows(kind, targets);
    const Eigen::Index n = y.size(), k = L.rows();
    residual = scaled_residual(sys, y, scale);
    for (int it = 0; it < max_iter && residual > tol; ++it) {
        Eigen::MatrixXd J = fd_jacobian(sys, y);
        Eigen::VectorXd f(n);
        sys(y, f);
        Eigen::MatrixXd A(n + k, n);
        A.topRows(n) = J;
        A.bottomRows(k) = scale * L;
        Eigen::VectorXd b(n + k);
        b.head(n) = -f;
        b.tail(k) = scale * (targets - L * y);
        // equilibrate rows and columns: coupling entries reach N g while
        // some correlation rows only see rates of order kappa
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            double w = A.row(i).cwiseAbs().maxCoeff();
            if (w > 0.0) {
                A.row(i) /= w;
                b[i] /= w;
            }
        }
        Eigen::VectorXd cs = A.colwise().norm().transpose();
        for (Eigen::Index j = 0; j < n; ++j)
            if (cs[j] > 0.0) A.col(j) /= cs[j];
            else cs[j] = 1.0;
        Eigen::VectorXd step = A.colPivHouseholderQr().solve(b).cwiseQuotient(cs);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            Eigen::VectorXd trial = y + lambda * step;
            double r = scaled_residual(sys, trial, scale);
            if (std::isfinite(r) && r < residual) {
                y = trial;
                residual = r;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) return residual <= tol;
    }
    return residual <= tol;
}

bool physical(ModelKind k, const Eigen::VectorXd& y) {
    for (int i = 0; i < n_pops(k); ++i)
        if (!(y[i] > -1e-9 && y[i] < 1.0 + 1e-9)) return false;
    return y[n_pops(k)] >= 0.0;
}

double slowest_rate(const SegmentSystem& sys, const Eigen::VectorXd& y) {
    Eigen::MatrixXd J = fd_jacobian(sys, y);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    if (es.info() != Eigen::Success) return 0.0;
    double vmax = 0.0;
    for (Eigen::Index i = 0; i < J.rows(); ++i) vmax = std::max(vmax, std::abs(es.eigenvalues()[i]));
    double slow = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        double re = std::abs(es.eigenvalues()[i].real());
        if (std::abs(es.eigenvalues()[i]) > 1e-9 * vmax && re > 0.0) slow = std::min(slow, re);
    }
    return std::isfinite(slow) ? slow : 0.0;
}

}  // namespace

double steady_residual(const Model& m, const Eigen::VectorXd& y) {
    double eps = m.kind == ModelKind::DrivenCumulant ? m.drive.rate(m.params.resonator.kappa) : 0.0;
    SegmentSystem sys(m, m.params.rates.xi, eps);
    return scaled_residual(sys, y, rate_scale(m));
}

SteadyStateResult steady_state(const Model& m, const Eigen::VectorXd& guess, const SolverSettings& solver,
                               const SteadyStateOptions& opts) {
    solver.validate();
    m.params.validate();
    check_state(m, guess);
    if (m.kind == ModelKind::DrivenCumulant) m.drive.validate(m.params);

    double eps = m.kind == ModelKind::DrivenCumulant ? m.drive.rate(m.params.resonator.kappa) : 0.0;
    SegmentSystem sys(m, m.params.rates.xi, eps);
    DenseFdSolver<double, SegmentSystem> lin(sys);
    const Eigen::VectorXd atol = atol_vector(m.kind, solver);
    const RodasOptions opt = rodas_options(solver);
    const double scale = rate_scale(m);

    SteadyStateResult res;
    res.rate_scale = scale;
    Eigen::VectorXd y = guess;
    if (opts.newton_first) {
        Eigen::VectorXd polished = y;
        double r = 0.0;
        if (newton_polish(sys, m.kind, polished, scale, opts.tol, opts.max_newton, r) && physical(m.kind, polished)) {
            res.state = polished;
            res.residual = r;
            res.newton_converged = true;
            return res;
        }
    }
    double slow = slowest_rate(sys, y);
    double horizon = slow > 0.0 ? 10.0 / slow : opts.max_time;
    horizon = std::min(horizon, opts.max_time);

    while (true) {
        rodas_integrate<double>(sys, lin, y, 0.0, horizon, atol, opt, [](const DenseStep<double>&) {});
        res.t_integrated += horizon;
        Eigen::VectorXd polished = y;
        double r = 0.0;
        bool ok = newton_polish(sys, m.kind, polished, scale, opts.tol, opts.max_newton, r);
        if (ok) {
            res.state = polished;
            res.residual = r;
            res.newton_converged = true;
            return res;
        }
        double r_int = scaled_residual(sys, y, scale);
        if (res.t_integrated >= opts.max_time) {
            if (r_int <= 1e3 * opts.tol) {
                res.state = y;
                res.residual = r_int;
                res.warnings.push_back("newton polish did not converge; returning integration endpoint");
                return res;
            }
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "steady state not reached after %.3g s (scaled residual %.3g)", res.t_integrated,
                          std::min(r, r_int));
            throw ConvergenceError(buf, std::min(r, r_int));
        }
        horizon = std::min(4.0 * horizon, opts.max_time - res.t_integrated);
    }
}

}  // namespace nvcool
