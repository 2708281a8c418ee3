#include <doctest.h>

#include <random>

#include "nvcool/cumulant.hpp"
#include "nvcool/errors.hpp"
#include "nvcool/moments.hpp"
#include "nvcool/units.hpp"

using namespace nvcool;

namespace {

MomentState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MomentState s;
    double sum = 0.0;
    for (double& p : s.pop) sum += (p = u(rng));
    for (double& p : s.pop) p /= sum;
    s.photon_n = 500.0 * u(rng);
    s.spin_photon = {u(rng) - 0.5, u(rng) - 0.5};
    s.spin_spin = {1e-3 * (u(rng) - 0.5), 1e-3 * (u(rng) - 0.5)};
    return s;
}

SystemParams pumped() {
    SystemParams p;
    p.rates.xi = pump_rate_from_power(2.0);
    return p;
}

}  // namespace

TEST_SUITE("cumulant") {

TEST_CASE("population rate matrix conserves probability") {
    auto R = population_rate_matrix(pumped().rates);
    for (int j = 0; j < 7; ++j) {
        CHECK(std::abs(R.col(j).sum()) <= 1e-9 * R.cwiseAbs().maxCoeff());
        for (int i = 0; i < 7; ++i)
            if (i != j) CHECK(R(i, j) >= 0.0);
    }
    CHECK(coherence_decay_13(pumped().rates) > pumped().rates.xi);
}

TEST_CASE("undriven populations are conserved") {
    std::mt19937 rng(7);
    SystemParams p = pumped();
    for (int k = 0; k < 20; ++k) {
        MomentState d = undriven_rhs(random_state(rng), p);
        double s = 0.0, scale = 0.0;
        for (double v : d.pop) s += v, scale += std::abs(v);
        CHECK(std::abs(s) <= 1e-12 * scale);
    }
}

TEST_CASE("packing round trips") {
    std::mt19937 rng(3);
    MomentState s = random_state(rng);
    MomentState t = MomentState::unpack(s.pack());
    CHECK(t.pop == s.pop);
    CHECK(t.spin_photon == s.spin_photon);
    DrivenMomentState d = DrivenMomentState::embed(s);
    d.a_mean = {1.0, -2.0};
    d.pop_cov(2, 5) = d.pop_cov(5, 2) = 0.125;
    d.pop_sigma13[6] = {0.5, 0.25};
    DrivenMomentState e = DrivenMomentState::unpack(d.pack());
    CHECK(e.a_mean == d.a_mean);
    CHECK(e.pop_cov(5, 2) == 0.125);
    CHECK(e.pop_sigma13[6] == d.pop_sigma13[6]);
    CHECK(d.pack().size() == DrivenMomentState::size);
    CHECK(DrivenMomentState::cov_index(1, 4) == DrivenMomentState::cov_index(4, 1));
}

TEST_CASE("zero drive reproduces the undriven equations") {
    std::mt19937 rng(11);
    SystemParams p = pumped();
    DriveParams off = DriveParams::at_frequency(p, p.resonator.omega_m, 0.0);
    for (int k = 0; k < 5; ++k) {
        MomentState s = random_state(rng);
        MomentState u = undriven_rhs(s, p);
        DrivenMomentState d = driven_rhs(DrivenMomentState::embed(s), p, off, 0.0);
        Eigen::VectorXd a = u.pack(), b = d.pack();
        for (int i = 0; i < MomentState::size; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12).scale(1e-300));
        CHECK(b.tail(DrivenMomentState::size - MomentState::size).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("drive window and detuning consistency") {
    SystemParams p;
    DriveParams d = DriveParams::at_frequency(p, p.resonator.omega_m - 5e6, 10.0, 1e-6, 2e-6);
    CHECK(d.detuning_mode == doctest::Approx(5e6));
    CHECK(d.detuning_mode - d.detuning_spin == doctest::Approx(p.resonator.omega_m - p.resonator.omega31));
    CHECK(!d.active(0.5e-6));
    CHECK(d.active(1.5e-6));
    CHECK(!d.active(2e-6));
    CHECK(d.rate(p.resonator.kappa) == doctest::Approx(10.0 * std::sqrt(p.resonator.kappa / 2)));
    d.detuning_spin += 1e3;
    CHECK_THROWS_AS(d.validate(p), DomainError);
    DriveParams w = DriveParams::at_frequency(p, p.resonator.omega_m, 1.0);
    w.t_start = 3.0;
    w.t_stop = 1.0;
    CHECK_THROWS_AS(w.validate(p), DomainError);
}

TEST_CASE("thermal state is stationary without pumping or coupling") {
    SystemParams p;
    p.resonator.g31 = 0.0;
    MomentState d = undriven_rhs(MomentState::thermal(p), p);
    Eigen::VectorXd v = d.pack();
    CHECK(v.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("closure sources the spin-photon correlation from the population imbalance") {
    SystemParams p = pumped();
    MomentState s = MomentState::thermal(p);
    s.pop = {0.6, 0.1, 0.3, 0, 0, 0, 0};
    MomentState d = undriven_rhs(s, p);
    // no correlation yet, so no exchange of energy
    CHECK(d.photon_n == doctest::Approx(0.0).scale(1e-9));
    CHECK(std::abs(d.spin_photon) > 0.0);
}

}
