#pragma once

// Fourth-order L-stable Rosenbrock method (RODAS4 coefficients, autonomous
// form) with embedded error estimate and third-order dense output. Generic in
// the scalar type and in the linear solver used for W = I/(gamma h) - J.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "nvcool/errors.hpp"

namespace nvcool {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct RodasOptions {
    double rtol = 1e-8;
    double h_initial = 0.0;  // 0 selects an automatic first step
    double h_max = 0.0;      // 0 means unbounded
    long max_steps = 20'000'000;
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
    long factorizations = 0;

    StepStats& operator+=(const StepStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        rhs_evals += o.rhs_evals;
        factorizations += o.factorizations;
        return *this;
    }
};

namespace rodas_coef {
inline constexpr double gamma = 0.25;
inline constexpr double a21 = 1.544;
inline constexpr double a31 = 0.9466785280815826, a32 = 0.2557011698983284;
inline constexpr double a41 = 3.314825187068521, a42 = 2.896124015972201, a43 = 0.9986419139977817;
inline constexpr double a51 = 1.221224509226641, a52 = 6.019134481288629, a53 = 12.53708332932087,
                        a54 = -0.6878860361058950;
inline constexpr double c21 = -5.6688;
inline constexpr double c31 = -2.430093356833875, c32 = -0.2063599157091915;
inline constexpr double c41 = -0.1073529058151375, c42 = -9.594562251023355, c43 = -20.47028614809616;
inline constexpr double c51 = 7.496443313967647, c52 = -10.24680431464352, c53 = -33.99990352819905,
                        c54 = 11.70890893206160;
inline constexpr double c61 = 8.083246795921522, c62 = -7.981132988064893, c63 = -31.52159432874371,
                        c64 = 16.31930543123136, c65 = -6.058818238834054;
inline constexpr double d21 = 10.12623508344586, d22 = -7.487995877610167, d23 = -34.80091861555747,
                        d24 = -7.992771707568823, d25 = 1.025137723295662;
inline constexpr double d31 = -0.6762803392801253, d32 = 6.087714651680015, d33 = 16.43084320892478,
                        d34 = 24.76722511418386, d35 = -6.594389125716872;
}  // namespace rodas_coef

// Accepted step with its interpolant; valid until the next step is taken.
template <class Scalar>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    const Vec<Scalar>* y0 = nullptr;
    const Vec<Scalar>* y1 = nullptr;
    Vec<Scalar> cont3;
    Vec<Scalar> cont4;

    double t1() const { return t0 + h; }

    Vec<Scalar> operator()(double t) const {
        double s = (t - t0) / h;
        return (*y0) * (1.0 - s) + s * ((*y1) + (1.0 - s) * (cont3 + s * cont4));
    }
};

// Dense Jacobian by central differences, refreshed at the start of each step.
template <class Scalar, class System>
class DenseFdSolver {
public:
    explicit DenseFdSolver(const System& sys) : sys_(sys) {}

    void new_step(const Vec<Scalar>& y, StepStats& stats) {
        const Eigen::Index n = y.size();
        jac_.resize(n, n);
        Vec<Scalar> yp = y, fp(n), fm(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            double d = 1e-6 * std::max(1.0, std::abs(y[j]));
            yp[j] = y[j] + d;
            sys_(yp, fp);
            yp[j] = y[j] - d;
            sys_(yp, fm);
            yp[j] = y[j];
            jac_.col(j) = (fp - fm) / (2.0 * d);
        }
        stats.rhs_evals += 2 * n;
    }

    void factorize(double h, StepStats& stats) {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w = -jac_;
        w.diagonal().array() += Scalar(1.0 / (rodas_coef::gamma * h));
        lu_.compute(w);
        ++stats.factorizations;
    }

    void solve(Vec<Scalar>& b) const { b = lu_.solve(b); }
    double quantize(double h) const { return h; }

    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& jacobian() const { return jac_; }

private:
    const System& sys_;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac_;
    Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu_;
};

// Constant sparse Jacobian (linear systems). Step sizes are snapped to powers
// of two so that factorizations can be cached and reused.
template <class Scalar>
class SparseConstSolver {
public:
    using SpMat = Eigen::SparseMatrix<Scalar>;

    explicit SparseConstSolver(const SpMat& jac) : jac_(jac) {}

    void new_step(const Vec<Scalar>&, StepStats&) {}

    void factorize(double h, StepStats& stats) {
        auto it = cache_.find(h);
        if (it == cache_.end()) {
            SpMat id(jac_.rows(), jac_.cols());
            id.setIdentity();
            SpMat w = id * Scalar(1.0 / (rodas_coef::gamma * h)) - jac_;
            w.makeCompressed();
            auto lu = std::make_unique<Eigen::SparseLU<SpMat>>();
            lu->compute(w);
            if (lu->info() != Eigen::Success)
                throw IntegrationError("sparse factorization failed", 0.0);
            ++stats.factorizations;
            it = cache_.emplace(h, std::move(lu)).first;
        }
        current_ = it->second.get();
    }

    void solve(Vec<Scalar>& b) const { b = current_->solve(b); }

    double quantize(double h) const { return std::exp2(std::floor(std::log2(h))); }

private:
    const SpMat& jac_;
    std::map<double, std::unique_ptr<Eigen::SparseLU<SpMat>>> cache_;
    Eigen::SparseLU<SpMat>* current_ = nullptr;
};

template <class Scalar>
bool all_finite(const Vec<Scalar>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(std::abs(v[i]))) return false;
    return true;
}

// Integrates y' = sys(y) from t0 to exactly t1. Calls obs(const DenseStep&)
// after every accepted step. atol is per component (real).
template <class Scalar, class System, class LinSolver, class Observer>
StepStats rodas_integrate(const System& sys, LinSolver& lin, Vec<Scalar>& y, double t0, double t1,
                          const Eigen::VectorXd& atol, const RodasOptions& opt, Observer&& obs) {
    using namespace rodas_coef;
    StepStats stats;
    if (!(t1 > t0)) return stats;
    if (!all_finite(y)) throw IntegrationError("non-finite state at t = " + std::to_string(t0), t0);

    const Eigen::Index n = y.size();
    Vec<Scalar> f0(n), ftmp(n), ytmp(n), g1(n), g2(n), g3(n), g4(n), g5(n), err(n), ynew(n);

    auto wnorm = [&](const Vec<Scalar>& e, const Vec<Scalar>& ya, const Vec<Scalar>& yb) {
        double m = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double sc = atol[i] + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            m = std::max(m, std::abs(e[i]) / sc);
        }
        return m;
    };

    const double span = t1 - t0;
    double h = opt.h_initial;
    if (h <= 0.0) {
        sys(y, f0);
        ++stats.rhs_evals;
        double d0 = wnorm(y, y, y), d1 = wnorm(f0, y, y);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
        h = std::min(h, span);
    }
    const double h_min = 1e-14 * std::max(std::abs(t1), span);
    // the estimate above collapses when f is large on components that start at zero
    h = std::min(std::max(h, 100.0 * h_min), span);
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

    double t = t0;
    bool first = true, last_rejected = false;
    double h_old = h, err_old = 1.0;
    Vec<Scalar> yold;

    lin.new_step(y, stats);
    bool need_jac = false;

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw IntegrationError("step budget exhausted at t = " + std::to_string(t), t);
        double hq = lin.quantize(h);
        bool lands = false;
        if (t1 - (t + hq) < 1e-3 * hq) {
            hq = t1 - t;
            lands = true;
        }
        if (hq < h_min) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "step size underflow (h = %.3g s) at t = %.17g s; system too stiff or singular",
                          hq, t);
            throw IntegrationError(buf, t);
        }
        if (need_jac) {
            lin.new_step(y, stats);
            need_jac = false;
        }
        lin.factorize(hq, stats);

        sys(y, f0);
        g1 = f0;
        lin.solve(g1);

        ytmp = y + a21 * g1;
        sys(ytmp, ftmp);
        g2 = ftmp + (c21 / hq) * g1;
        lin.solve(g2);

        ytmp = y + a31 * g1 + a32 * g2;
        sys(ytmp, ftmp);
        g3 = ftmp + (c31 * g1 + c32 * g2) / hq;
        lin.solve(g3);

        ytmp = y + a41 * g1 + a42 * g2 + a43 * g3;
        sys(ytmp, ftmp);
        g4 = ftmp + (c41 * g1 + c42 * g2 + c43 * g3) / hq;
        lin.solve(g4);

        ytmp = y + a51 * g1 + a52 * g2 + a53 * g3 + a54 * g4;
        sys(ytmp, ftmp);
        g5 = ftmp + (c51 * g1 + c52 * g2 + c53 * g3 + c54 * g4) / hq;
        lin.solve(g5);

        ytmp += g5;
        sys(ytmp, ftmp);
        err = ftmp + (c61 * g1 + c62 * g2 + c63 * g3 + c64 * g4 + c65 * g5) / hq;
        lin.solve(err);
        ynew = ytmp + err;
        stats.rhs_evals += 6;

        double e = all_finite(ynew) && all_finite(err) ? wnorm(err, y, ynew)
                                                       : std::numeric_limits<double>::infinity();
        double fac = std::isfinite(e) ? std::clamp(std::pow(e, 0.25) / 0.9, 1.0 / 6.0, 5.0) : 6.0;
        double h_new = hq / fac;

        if (e <= 1.0) {
            if (!first) {
                double fac_pred = (h_old / hq) * std::pow(e * e / err_old, 0.25) / 0.9;
                fac_pred = std::clamp(fac_pred, 1.0 / 6.0, 5.0);
                fac = std::max(fac, fac_pred);
                h_new = hq / fac;
            }
            first = false;
            h_old = hq;
            err_old = std::max(0.01, e);
            if (last_rejected) h_new = std::min(h_new, hq);
            last_rejected = false;

            DenseStep<Scalar> ds;
            ds.t0 = t;
            ds.h = hq;
            yold = y;
            ds.y0 = &yold;
            ds.y1 = &ynew;
            ds.cont3 = d21 * g1 + d22 * g2 + d23 * g3 + d24 * g4 + d25 * g5;
            ds.cont4 = d31 * g1 + d32 * g2 + d33 * g3 + d34 * g4 + d35 * g5;
            y = ynew;
            t = lands ? t1 : t + hq;
            ++stats.accepted;
            obs(ds);
            need_jac = true;
            h = h_new;
        } else {
            ++stats.rejected;
            last_rejected = true;
            h = h_new;
        }
        if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
    }
    return stats;
}

}  // namespace nvcool
