#include <doctest.h>

#include <cmath>
#include <random>

#include "nvcool/errors.hpp"
#include "nvcool/lindblad.hpp"
#include "nvcool/units.hpp"

using namespace nvcool;

namespace {

Eigen::MatrixXcd random_density(int D, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd A(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) A(i, j) = {g(rng), g(rng)};
    Eigen::MatrixXcd rho = A * A.adjoint();
    return rho / rho.trace();
}

SystemParams pumped_single() {
    SystemParams p;
    p.rates.xi = pump_rate_from_power(2.0);
    p.resonator.n_spins = 1;
    p.resonator.bath_temperature = 0.5;
    p.resonator.g31 = 3e4;
    return p;
}

// Spin density matrix with a 1-3 coherence times a truncated coherent state.
DensityState coherent_product(OracleDims dims, const std::array<double, 7>& pops, cplx s13, cplx alpha) {
    const int F = dims.fock_cutoff;
    Eigen::MatrixXcd spin = Eigen::MatrixXcd::Zero(7, 7);
    for (int i = 0; i < 7; ++i) spin(i, i) = pops[i];
    spin(2, 0) = s13;  // <sigma^13> = rho_31
    spin(0, 2) = std::conj(s13);
    Eigen::VectorXcd c(F);
    double fact = 1.0;
    for (int n = 0; n < F; ++n) {
        if (n > 0) fact *= n;
        c[n] = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(fact);
    }
    c /= c.norm();
    Eigen::MatrixXcd mode = c * c.adjoint();
    DensityState st{dims, Eigen::MatrixXcd::Zero(7 * F, 7 * F)};
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            if (spin(a, b) != cplx(0.0)) st.rho.block(a * F, b * F, F, F) = spin(a, b) * mode;
    return st;
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("dimensions") {
    CHECK(OracleDims{1, 8}.hilbert_dim() == 56);
    CHECK(OracleDims{2, 5}.hilbert_dim() == 245);
    CHECK_THROWS_AS((OracleDims{3, 5}.validate()), DomainError);
    CHECK_THROWS_AS((OracleDims{1, 1}.validate()), DomainError);
}

TEST_CASE("generator preserves trace and hermiticity") {
    std::mt19937 rng(5);
    SystemParams p = pumped_single();
    for (OracleDims dims : {OracleDims{1, 6}, OracleDims{2, 3}}) {
        p.resonator.n_spins = dims.n_spins;
        for (bool driven : {false, true}) {
            std::optional<DriveParams> d;
            if (driven) d = DriveParams::at_frequency(p, p.resonator.omega_m - 2e6, 50.0);
            Liouvillian L = build_liouvillian(p, d, dims);
            Eigen::MatrixXcd rho = random_density(dims.hilbert_dim(), rng);
            Eigen::MatrixXcd dr = L.apply(rho);
            double scale = dr.cwiseAbs().maxCoeff();
            CHECK(std::abs(dr.trace()) <= 1e-12 * scale * dims.hilbert_dim());
            CHECK((dr - dr.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        }
    }
}

TEST_CASE("product state helpers") {
    OracleDims dims{1, 10};
    DensityState s = DensityState::product(dims, {0.6, 0.1, 0.3, 0, 0, 0, 0}, 0.5);
    s.validate();
    OracleMoments m = oracle_moments(s);
    CHECK(m.pop[0] == doctest::Approx(0.6));
    CHECK(m.photon_n == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::abs(m.a_mean) == 0.0);
    DensityState bad = s;
    bad.rho(0, 1) = 0.3;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("vacuum Rabi oscillation at twice the coupling") {
    SystemParams p;
    NvRates none;
    for (double* r : {&none.xi, &none.k_sp, &none.k47, &none.k57, &none.k67, &none.k71, &none.k72, &none.k73,
                      &none.k31, &none.k13, &none.k21, &none.k12, &none.chi2, &none.chi3})
        *r = 0.0;
    p.rates = none;
    p.resonator.n_spins = 1;
    p.resonator.kappa = 1e-9;  // closed system up to a vanishing leak
    p.resonator.bath_temperature = 0.0;
    p.resonator.g31 = 1e5;
    OracleDims dims{1, 4};
    DensityState s = DensityState::product(dims, {0, 0, 1, 0, 0, 0, 0}, 0.0);
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i) t.push_back(i * 2.5e-6);
    OracleSeries ex = evolve(s, build_liouvillian(p, std::nullopt, dims), t, 1e-12);
    double worst = 0.0;
    for (const auto& m : ex.samples) {
        double g = p.resonator.g31;
        worst = std::max(worst, std::abs(m.photon_n - std::pow(std::sin(g * m.t), 2)));
        worst = std::max(worst, std::abs(m.pop[0] - std::pow(std::sin(g * m.t), 2)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("cumulant derivatives are exact on product states") {
    // first and second moments of a spin-mode product state with a coherent
    // mode factorize exactly, so both right-hand sides must agree there
    SystemParams p = pumped_single();
    OracleDims dims{1, 40};
    std::array<double, 7> pops{0.45, 0.15, 0.3, 0.04, 0.03, 0.02, 0.01};
    cplx s13{0.12, -0.05};
    cplx alpha{1.1, 0.6};
    DensityState st = coherent_product(dims, pops, s13, alpha);
    st.validate(1e-9);
    OracleMoments m0 = oracle_moments(st);

    DriveParams d = DriveParams::at_frequency(p, p.resonator.omega_m - 3e5, 400.0);
    Liouvillian L = build_liouvillian(p, d, dims);
    OracleMoments dm = oracle_moments(DensityState{dims, L.apply(st.rho)});

    DrivenMomentState y;
    y.base.pop = m0.pop;
    y.base.photon_n = m0.photon_n;
    y.base.spin_photon = m0.spin_photon;
    y.base.spin_spin = std::norm(m0.sigma13_mean);
    y.a_mean = m0.a_mean;
    y.sigma13_mean = m0.sigma13_mean;
    y.aa = m0.a_mean * m0.a_mean;
    y.a_sigma13 = m0.a_mean * m0.sigma13_mean;
    for (int i = 0; i < 7; ++i) {
        y.a_pop[i] = m0.a_mean * m0.pop[i];
        y.pop_sigma13[i] = m0.pop[i] * m0.sigma13_mean;
    }
    y.sigma13_sigma13 = m0.sigma13_mean * m0.sigma13_mean;
    DrivenMomentState dy = driven_rhs(y, p, d, 0.0);

    auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), 1e-3); };
    for (int i = 0; i < 7; ++i) {
        CAPTURE(i);
        CHECK(close(dm.pop[i], dy.base.pop[i]));
    }
    CHECK(close(dm.photon_n, dy.base.photon_n));
    CHECK(close(dm.a_mean, dy.a_mean));
    CHECK(close(dm.sigma13_mean, dy.sigma13_mean));
    CHECK(close(dm.spin_photon, dy.base.spin_photon));
}

TEST_CASE("undriven derivatives agree on uncorrelated thermal products") {
    SystemParams p = pumped_single();
    OracleDims dims{1, 40};
    std::array<double, 7> pops{0.5, 0.2, 0.25, 0.02, 0.01, 0.01, 0.01};
    DensityState st = DensityState::product(dims, pops, 1.5);
    OracleMoments m0 = oracle_moments(st);
    OracleMoments dm = oracle_moments(DensityState{dims, build_liouvillian(p, std::nullopt, dims).apply(st.rho)});
    MomentState y;
    y.pop = m0.pop;
    y.photon_n = m0.photon_n;
    MomentState dy = undriven_rhs(y, p);
    for (int i = 0; i < 7; ++i) CHECK(dm.pop[i] == doctest::Approx(dy.pop[i]).epsilon(1e-8).scale(1e-6));
    CHECK(std::abs(dm.spin_photon - dy.spin_photon) <= 1e-6 * std::abs(dy.spin_photon));
}

}
