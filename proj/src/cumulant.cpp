#include "nvcool/cumulant.hpp"

#include <cmath>

#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double sgn[7] = {-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};

cplx at(const double* y, int i) { return {y[i], y[i + 1]}; }

void put(double* dy, int i, cplx v) {
    dy[i] = v.real();
    dy[i + 1] = v.imag();
}

void check_finite(const double* y, int n) {
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(y[i])) throw IntegrationError("non-finite moment state", 0.0);
}

}  // namespace

DriveParams DriveParams::at_frequency(const SystemParams& p, double omega_d, double amplitude,
                                      double t_start, double t_stop) {
    DriveParams d;
    d.amplitude = amplitude;
    d.detuning_spin = p.resonator.omega31 - omega_d;
    d.detuning_mode = p.resonator.omega_m - omega_d;
    d.t_start = t_start;
    d.t_stop = t_stop;
    return d;
}

double DriveParams::rate(double kappa) const { return amplitude * std::sqrt(kappa / 2.0); }

void DriveParams::validate(const SystemParams& p) const {
    if (!(t_start <= t_stop)) throw DomainError("drive window must satisfy t_start <= t_stop");
    if (!std::isfinite(amplitude) || !std::isfinite(detuning_spin) || !std::isfinite(detuning_mode))
        throw DomainError("drive parameters must be finite");
    double frame = detuning_mode - detuning_spin;
    double lab = p.resonator.omega_m - p.resonator.omega31;
    double scale = std::max({std::abs(p.resonator.omega_m), std::abs(detuning_mode), 1.0});
    if (std::abs(frame - lab) > 1e-9 * scale)
        throw DomainError("drive detunings inconsistent with omega_m - omega31");
}

Eigen::Matrix<double, 7, 7> population_rate_matrix(const NvRates& r) {
    Eigen::Matrix<double, 7, 7> R = Eigen::Matrix<double, 7, 7>::Zero();
    auto link = [&](int from, int to, double k) {
        R(to - 1, from - 1) += k;
        R(from - 1, from - 1) -= k;
    };
    link(1, 4, r.xi);
    link(2, 5, r.xi);
    link(3, 6, r.xi);
    link(4, 1, r.xi + r.k_sp);
    link(5, 2, r.xi + r.k_sp);
    link(6, 3, r.xi + r.k_sp);
    link(4, 7, r.k47);
    link(5, 7, r.k57);
    link(6, 7, r.k67);
    link(7, 1, r.k71);
    link(7, 2, r.k72);
    link(7, 3, r.k73);
    link(1, 2, r.k12);
    link(2, 1, r.k21);
    link(1, 3, r.k13);
    link(3, 1, r.k31);
    return R;
}

double coherence_decay_13(const NvRates& r) { return r.xi + r.chi3 + 0.5 * (r.k12 + r.k13 + r.k31); }

CumulantKernel::CumulantKernel(const SystemParams& p)
    : R_(population_rate_matrix(p.rates)),
      kappa_(p.resonator.kappa),
      nth_(p.thermal_photons()),
      n_(p.resonator.n_spins),
      g_(p.resonator.g31),
      delta_(p.resonator.omega_m - p.resonator.omega31),
      gamma13_(coherence_decay_13(p.rates)) {}

void CumulantKernel::undriven(const double* y, double* dy) const {
    Eigen::Map<const Eigen::Matrix<double, 7, 1>> p(y);
    Eigen::Map<Eigen::Matrix<double, 7, 1>> dp(dy);
    const double n = y[MomentState::i_photon];
    const cplx x = at(y, MomentState::i_spin_photon);
    const cplx css = at(y, MomentState::i_spin_spin);

    dp.noalias() = R_ * p;
    // ig(x - x*) enters level 3 and leaves level 1
    dp[0] += 2.0 * g_ * x.imag();
    dp[2] -= 2.0 * g_ * x.imag();

    dy[MomentState::i_photon] = kappa_ * (nth_ - n) + 2.0 * n_ * g_ * x.imag();

    const double gx = 0.5 * kappa_ + gamma13_;
    cplx dx = (I * delta_ - gx) * x + I * g_ * (p[2] * (1.0 + n) - p[0] * n) + I * (n_ - 1.0) * g_ * css;
    put(dy, MomentState::i_spin_photon, dx);

    cplx dcss = -2.0 * gamma13_ * css + I * g_ * (p[2] - p[0]) * (std::conj(x) - x);
    put(dy, MomentState::i_spin_spin, dcss);
}

void CumulantKernel::driven(const double* y, double* dy, double eps, double det_spin,
                            double det_mode) const {
    using D = DrivenMomentState;
    undriven(y, dy);

    const double* p = y;
    const double n = y[MomentState::i_photon];
    const cplx x = at(y, MomentState::i_spin_photon);
    const cplx a = at(y, D::i_a);
    const cplx s = at(y, D::i_s);
    const cplx aa = at(y, D::i_aa);
    const cplx w = at(y, D::i_w);
    const cplx u = at(y, D::i_u);
    const cplx css = at(y, MomentState::i_spin_spin);
    cplx v[7], q[7];
    for (int i = 0; i < 7; ++i) {
        v[i] = at(y, D::i_v + 2 * i);
        q[i] = at(y, D::i_q + 2 * i);
    }
    Eigen::Matrix<double, 7, 7> C;
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) C(i, j) = C(j, i) = y[D::i_cov + D::cov_index(i, j)];

    const double g = g_, N = n_;
    const double gx = 0.5 * kappa_ + gamma13_;
    const cplx ac = std::conj(a);
    const double a2 = std::norm(a);

    // closure corrections on the undriven block; exactly zero when the added moments vanish
    cplx dx_corr = I * g * (a * std::conj(v[2] - v[0]) + ac * (v[2] - v[0]) - 2.0 * a2 * (p[2] - p[0])) +
                   I * eps * s;
    dy[MomentState::i_spin_photon] += dx_corr.real();
    dy[MomentState::i_spin_photon + 1] += dx_corr.imag();
    dy[MomentState::i_photon] += -2.0 * eps * a.imag();

    cplx wc[7];  // <a^dag s1^jj s2^13> minus its factorized part p_j x
    for (int j = 0; j < 7; ++j) wc[j] = std::conj(v[j]) * s + q[j] * ac - 2.0 * ac * p[j] * s;
    dy[MomentState::i_spin_spin] += -2.0 * g * (wc[0] - wc[2]).imag();

    put(dy, D::i_a, -(I * det_mode + 0.5 * kappa_) * a - I * g * N * s - I * eps);
    put(dy, D::i_s, -(I * det_spin + gamma13_) * s + I * g * (v[2] - v[0]));
    put(dy, D::i_aa, -(2.0 * I * det_mode + kappa_) * aa - 2.0 * I * g * N * w - 2.0 * I * eps * a);

    auto aa_sig = [&](int i) { return aa * p[i] + 2.0 * a * v[i] - 2.0 * a * a * p[i]; };
    put(dy, D::i_w,
        -(I * (det_mode + det_spin) + gx) * w - I * g * (N - 1.0) * u - I * eps * s +
            I * g * (aa_sig(2) - aa_sig(0)));

    auto z = [&](int i) { return a * q[i] + p[i] * w + s * v[i] - 2.0 * a * p[i] * s; };
    put(dy, D::i_u, -(2.0 * I * det_spin + 2.0 * gamma13_) * u + 2.0 * I * g * (z(2) - z(0)));

    const cplx adag_a_s13 = n * s + x * a + w * ac - 2.0 * a2 * s;
    const cplx aa_s31 = aa * std::conj(s) + 2.0 * a * std::conj(x) - 2.0 * a * a * std::conj(s);
    const cplx t1 = ac * u + 2.0 * s * x - 2.0 * ac * s * s;
    const cplx t2 = a * css + std::conj(s) * w + s * std::conj(x) - 2.0 * a * std::norm(s);
    auto t3 = [&](int i, int j) { return v[i] * p[j] + v[j] * p[i] + a * C(i, j) - a * p[i] * p[j]; };

    for (int i = 0; i < 7; ++i) {
        cplx rv = 0.0, rq = 0.0;
        for (int j = 0; j < 7; ++j) {
            rv += R_(i, j) * v[j];
            rq += R_(i, j) * q[j];
        }
        cplx dv = -(I * det_mode + 0.5 * kappa_) * v[i] + rv - I * g * (N - 1.0) * q[i] - I * eps * p[i];
        if (i == 2) dv -= I * g * s;
        if (sgn[i] != 0.0) dv += I * g * sgn[i] * (adag_a_s13 + s - aa_s31);
        put(dy, D::i_v + 2 * i, dv);

        cplx dq = rq - (I * det_spin + gamma13_) * q[i] + I * g * (t3(i, 2) - t3(i, 0));
        if (sgn[i] != 0.0) dq += I * g * sgn[i] * (t1 - t2);
        put(dy, D::i_q + 2 * i, dq);
    }

    Eigen::Matrix<double, 7, 7> dC = R_ * C + C * R_.transpose();
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j)
            dy[D::i_cov + D::cov_index(i, j)] =
                dC(i, j) - 2.0 * g * (sgn[i] * wc[j].imag() + sgn[j] * wc[i].imag());
}

MomentState undriven_rhs(const MomentState& state, const SystemParams& params) {
    Eigen::VectorXd y = state.pack(), dy(MomentState::size);
    check_finite(y.data(), MomentState::size);
    CumulantKernel(params).undriven(y.data(), dy.data());
    return MomentState::unpack(dy);
}

DrivenMomentState driven_rhs(const DrivenMomentState& state, const SystemParams& params,
                             const DriveParams& drive, double t) {
    drive.validate(params);
    Eigen::VectorXd y = state.pack(), dy(DrivenMomentState::size);
    check_finite(y.data(), DrivenMomentState::size);
    double eps = drive.active(t) ? drive.rate(params.resonator.kappa) : 0.0;
    CumulantKernel(params).driven(y.data(), dy.data(), eps, drive.detuning_spin, drive.detuning_mode);
    return DrivenMomentState::unpack(dy);
}

}  // namespace nvcool
