#include <doctest.h>

#include <cmath>

#include "nvcool/errors.hpp"
#include "nvcool/integrate.hpp"
#include "nvcool/rate_model.hpp"

using namespace nvcool;

namespace {

SystemParams at_power(const char* name, double P) {
    SystemParams p = preset(name);
    p.rates.xi = pump_rate_from_power(P, p.optics, p.constants);
    return p;
}

std::array<double, 3> steady_pops(const SystemParams& p, ModelKind k, double* photon = nullptr) {
    Model m{k, p, {}};
    SteadyStateResult ss = steady_state(m, initial_state(m), {}, {});
    if (photon) *photon = state_photon_number(k, ss.state);
    auto pop = state_populations(m, p.rates.xi, ss.state);
    return {pop[0], pop[1], pop[2]};
}

}  // namespace

TEST_SUITE("rate-model") {

TEST_CASE("energy transfer rate is a Lorentzian") {
    SystemParams p;
    ComplexDetuning d = ComplexDetuning::transition_31(p);
    double w = d.value.imag();
    CHECK(w == doctest::Approx(0.5 * (p.resonator.kappa + p.rates.k12 + p.rates.k13 + p.rates.k31) + p.rates.xi +
                               p.rates.chi3));
    double k0 = k_eet(0.69, d);
    CHECK(k0 == doctest::Approx(2 * 0.69 * 0.69 / w));
    ComplexDetuning off{d.value + cplx(w, 0.0)};
    CHECK(k_eet(0.69, off) == doctest::Approx(0.5 * k0));
    CHECK(k_eet(0.0, d) == 0.0);
    CHECK_THROWS_AS(k_eet(1.0, ComplexDetuning{{1.0, 0.0}}), DomainError);
    ComplexDetuning d21 = ComplexDetuning::transition_21(p);
    CHECK(d21.value.real() == doctest::Approx(p.resonator.omega_m - p.resonator.omega21));
}

TEST_CASE("adiabatic photon number limits") {
    SystemParams p = at_power("high-frequency", 2.0);
    SystemParams dark = p;
    dark.resonator.g31 = 0.0;
    CHECK(adiabatic_photon_number(0.5, 0.2, dark) == doctest::Approx(p.thermal_photons()));
    double nk = p.resonator.n_spins * k_eet(p.resonator.g31, ComplexDetuning::transition_31(p));
    CHECK(adiabatic_photon_number(0.3, 0.3, p) ==
          doctest::Approx(p.thermal_photons() + nk * 0.3 / p.resonator.kappa));
    SystemParams single = p;
    single.resonator.g21 = 0.0;
    CHECK(two_transition_photon_number({0.5, 0.25, 0.25}, single) ==
          doctest::Approx(adiabatic_photon_number(0.5, 0.25, single)).epsilon(1e-14));
    SystemParams huge = p;
    huge.resonator.n_spins = 1e25;
    CHECK_THROWS_AS(adiabatic_photon_number(0.1, 0.8, huge), MasingThresholdError);
    CHECK_THROWS_AS(two_transition_photon_number({0.1, 0.1, 0.8}, huge), MasingThresholdError);
}

TEST_CASE("rate model conserves populations") {
    SystemParams p = at_power("high-frequency", 2.0);
    RateState s;
    s.pop = {0.4, 0.2, 0.2, 0.05, 0.05, 0.05, 0.05};
    s.photon_n = 400.0;
    RateState d = rate_rhs(s, p);
    double sum = 0.0;
    for (double v : d.pop) sum += v;
    double scale = 0.0;
    for (double v : d.pop) scale = std::max(scale, std::abs(v));
    CHECK(std::abs(sum) <= 1e-13 * scale);
}

TEST_CASE("reduced and full rate models agree in steady state") {
    for (double xi : {10.0, 1e3, 2.19e3, 3e4, 1e5}) {
        SystemParams p = preset("high-frequency");
        p.rates.xi = xi;
        double n_full = 0, n_red = 0;
        auto full = steady_pops(p, ModelKind::Rate, &n_full);
        auto red = steady_pops(p, ModelKind::Reduced, &n_red);
        CAPTURE(xi);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(red[i] / full[i] - 1.0) <= 5e-3);
    }
}

// The reduced ground manifold carries unit weight, so its photon number drifts from the
// full model by roughly the excited-state fraction (0.65% at 1e5).
TEST_CASE("reduced and full rate models give the same steady photon number") {
    for (double xi : {10.0, 1e3, 2.19e3, 3e4, 1e5}) {
        SystemParams p = preset("high-frequency");
        p.rates.xi = xi;
        double n_full = 0, n_red = 0;
        steady_pops(p, ModelKind::Rate, &n_full);
        steady_pops(p, ModelKind::Reduced, &n_red);
        CAPTURE(xi);
        CHECK(std::abs(n_red / n_full - 1.0) <= 5e-3);
    }
}

TEST_CASE("closed-form ground populations solve the reduced equations") {
    for (double xi : {10.0, 2.19e3, 1e5, 1e6}) {
        SystemParams p = preset("high-frequency");
        p.rates.xi = xi;
        Model m{ModelKind::Reduced, p, {}};
        Eigen::VectorXd red = steady_state(m, initial_state(m), {}, {}).state;
        auto an = analytic_ground_populations(tilde_rates(xi, p.rates), p.rates);
        CAPTURE(xi);
        for (int i = 0; i < 3; ++i) CHECK(an[i] == doctest::Approx(red[i]).epsilon(1e-6));
        CHECK(an[1] == doctest::Approx(an[2]).epsilon(1e-9));
    }
}

TEST_CASE("analytic population dynamics") {
    SystemParams p = at_power("high-frequency", 2.0);
    TildeRates kt = tilde_rates(p.rates.xi, p.rates);
    auto ground = analytic_ground_populations(kt, p.rates);
    CHECK(analytic_population_dynamics(0.0, kt, p.rates, PumpPhase::Pumping) == doctest::Approx(1.0 / 3.0));
    CHECK(analytic_population_dynamics(1.0, kt, p.rates, PumpPhase::Pumping) == doctest::Approx(ground[0]).epsilon(1e-6));
    CHECK(analytic_population_dynamics(0.0, kt, p.rates, PumpPhase::Dark) ==
          doctest::Approx(analytic_population_dynamics(1.0, kt, p.rates, PumpPhase::Pumping)));
    CHECK(analytic_population_dynamics(10.0, kt, p.rates, PumpPhase::Dark) == doctest::Approx(1.0 / 3.0));
    CHECK(symmetric_upper_population(0.5) == 0.25);
    auto full = reduced_full_populations({ground[0], ground[1], ground[2]}, p.rates.xi, p.rates);
    double s = 0.0;
    for (double v : full) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("adiabatic formula matches the rate model steady photon number") {
    SystemParams p = at_power("high-frequency", 2.0);
    double n_rate = 0.0;
    auto pops = steady_pops(p, ModelKind::Rate, &n_rate);
    CHECK(std::abs(adiabatic_photon_number(pops[0], pops[2], p) / n_rate - 1.0) <= 0.01);
}

TEST_CASE("second transition contributes about five percent at the low-frequency resonance") {
    SystemParams p = at_power("low-frequency", 2.0);
    auto pops = steady_pops(p, ModelKind::Rate);
    SystemParams only31 = p;
    only31.resonator.g21 = 0.0;
    double n_two = two_transition_photon_number(pops, p);
    double n_31 = two_transition_photon_number(pops, only31);
    CHECK(n_31 > n_two);
    CHECK(std::abs((n_31 - n_two) / p.thermal_photons() - 0.05) <= 0.01);
}

}
