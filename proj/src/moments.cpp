#include "nvcool/moments.hpp"

#include <utility>

#include "nvcool/params.hpp"

namespace nvcool {

MomentState MomentState::thermal(const SystemParams& p) {
    MomentState m;
    m.pop = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 0.0};
    m.photon_n = p.thermal_photons();
    return m;
}

double MomentState::pop_sum() const {
    double s = 0.0;
    for (double v : pop) s += v;
    return s;
}

Eigen::VectorXd MomentState::pack() const {
    Eigen::VectorXd y(size);
    for (int i = 0; i < 7; ++i) y[i] = pop[i];
    y[i_photon] = photon_n;
    y[i_spin_photon] = spin_photon.real();
    y[i_spin_photon + 1] = spin_photon.imag();
    y[i_spin_spin] = spin_spin.real();
    y[i_spin_spin + 1] = spin_spin.imag();
    return y;
}

MomentState MomentState::unpack(const Eigen::VectorXd& y) {
    MomentState m;
    for (int i = 0; i < 7; ++i) m.pop[i] = y[i];
    m.photon_n = y[i_photon];
    m.spin_photon = {y[i_spin_photon], y[i_spin_photon + 1]};
    m.spin_spin = {y[i_spin_spin], y[i_spin_spin + 1]};
    return m;
}

int DrivenMomentState::cov_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * 7 - i * (i - 1) / 2 + (j - i);
}

DrivenMomentState DrivenMomentState::embed(const MomentState& m) {
    DrivenMomentState d;
    d.base = m;
    return d;
}

namespace {

void put(Eigen::VectorXd& y, int i, cplx v) {
    y[i] = v.real();
    y[i + 1] = v.imag();
}

cplx get(const Eigen::VectorXd& y, int i) { return {y[i], y[i + 1]}; }

}  // namespace

Eigen::VectorXd DrivenMomentState::pack() const {
    Eigen::VectorXd y(size);
    y.head(MomentState::size) = base.pack();
    put(y, i_a, a_mean);
    put(y, i_s, sigma13_mean);
    put(y, i_aa, aa);
    put(y, i_w, a_sigma13);
    for (int i = 0; i < 7; ++i) put(y, i_v + 2 * i, a_pop[i]);
    put(y, i_u, sigma13_sigma13);
    for (int i = 0; i < 7; ++i) put(y, i_q + 2 * i, pop_sigma13[i]);
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) y[i_cov + cov_index(i, j)] = pop_cov(i, j);
    return y;
}

DrivenMomentState DrivenMomentState::unpack(const Eigen::VectorXd& y) {
    DrivenMomentState d;
    d.base = MomentState::unpack(y.head(MomentState::size));
    d.a_mean = get(y, i_a);
    d.sigma13_mean = get(y, i_s);
    d.aa = get(y, i_aa);
    d.a_sigma13 = get(y, i_w);
    for (int i = 0; i < 7; ++i) d.a_pop[i] = get(y, i_v + 2 * i);
    d.sigma13_sigma13 = get(y, i_u);
    for (int i = 0; i < 7; ++i) d.pop_sigma13[i] = get(y, i_q + 2 * i);
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) d.pop_cov(i, j) = d.pop_cov(j, i) = y[i_cov + cov_index(i, j)];
    return d;
}

}  // namespace nvcool
