#include <doctest.h>

#include <cmath>

#include "nvcool/errors.hpp"
#include "nvcool/params.hpp"
#include "nvcool/units.hpp"

using namespace nvcool;

TEST_SUITE("units") {

TEST_CASE("thermal occupation anchors") {
    CHECK(std::abs(thermal_photon_number(two_pi * 9.22e9, 293.0) - 661.0) <= 1.0);
    CHECK(std::abs(thermal_photon_number(two_pi * 2.872e9, 293.0) - 2125.0) <= 2.0);
    CHECK(thermal_photon_number(two_pi * 1e9, 0.0) == 0.0);
    CHECK_THROWS_AS(thermal_photon_number(0.0, 300.0), DomainError);
    CHECK_THROWS_AS(thermal_photon_number(-1.0, 300.0), DomainError);
}

TEST_CASE("thermal occupation is monotone in T and omega") {
    double prev = 0.0;
    for (double T = 1.0; T < 1000.0; T *= 1.3) {
        double n = thermal_photon_number(two_pi * 5e9, T);
        CHECK(n > prev);
        prev = n;
    }
    prev = INFINITY;
    for (double f = 1e8; f < 1e12; f *= 1.7) {
        double n = thermal_photon_number(two_pi * f, 293.0);
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("effective temperature inverts thermal occupation") {
    for (double f : {1e8, 2.872e9, 9.22e9, 3e11})
        for (double T = 0.05; T < 2000.0; T *= 1.9) {
            double n = thermal_photon_number(two_pi * f, T);
            CHECK(std::abs(effective_temperature(two_pi * f, n) / T - 1.0) <= 1e-12);
        }
    CHECK(std::abs(effective_temperature(two_pi * 9.22e9, 661.0) - 293.0) < 0.5);
    CHECK(std::abs(effective_temperature(two_pi * 9.22e9, 298.0) - 132.0) < 1.0);
    CHECK(std::abs(effective_temperature(two_pi * 9.22e9, 261.0) - 116.0) < 1.0);
    CHECK_THROWS_AS(effective_temperature(two_pi * 9.22e9, 0.0), DomainError);
    CHECK_THROWS_AS(effective_temperature(two_pi * 9.22e9, -3.0), DomainError);
}

TEST_CASE("pump rate from laser power") {
    CHECK(std::abs(pump_rate_from_power(9.1e-3) - 10.0) < 0.1);
    CHECK(std::abs(pump_rate_from_power(2.0) - 2.19e3) < 5.0);
    CHECK(pump_rate_from_power(0.0) == 0.0);
    for (double P : {0.01, 0.7, 3.0, 250.0}) {
        CHECK(pump_rate_from_power(2.0 * P) == doctest::Approx(2.0 * pump_rate_from_power(P)).epsilon(1e-14));
        CHECK(power_from_pump_rate(pump_rate_from_power(P)) == doctest::Approx(P).epsilon(1e-14));
    }
    CHECK_THROWS_AS(pump_rate_from_power(-1.0), DomainError);
}

TEST_CASE("constants and optics validation") {
    PhysicalConstants c;
    CHECK(c.reduced_planck() == doctest::Approx(c.planck_h / two_pi));
    c.planck_h = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    OpticsParams o;
    CHECK(o.fresnel_reflectance() == doctest::Approx(std::pow(1.42 / 3.42, 2)));
    o.refr_index_diamond = 0.9;
    CHECK_THROWS_AS(o.validate(), DomainError);
}

TEST_CASE("laser heating of spin-lattice rates") {
    HeatingModel h;
    h.dT_per_watt = 125.0;  // one watt gives the quoted 125 K rise
    NvRates r;
    r.k31 = r.k13 = 26.0;
    r.k21 = r.k12 = 83.0;
    HeatingResult out = heated_rates(r, 1.0, h);
    CHECK(std::abs(out.rates.k31 - 154.0) <= 1.0);
    CHECK(std::abs(out.rates.k13 - 154.0) <= 1.0);
    CHECK(std::abs(out.rates.k21 - 490.0) <= 2.0);
    CHECK(out.delta_T == doctest::Approx(125.0));
    CHECK(out.delta_D == doctest::Approx(125.0 * h.dD_per_kelvin));
    CHECK(std::abs(std::pow((293.0 + 125.0) / 293.0, 5) - 5.909) <= 0.01);
    CHECK(out.rates.chi2 == r.chi2);
    CHECK(out.rates.k_sp == r.k_sp);

    HeatingResult none = heated_rates(r, 0.0, h);
    CHECK(none.rates.k31 == r.k31);
    CHECK(none.rates.k21 == r.k21);
    CHECK(none.delta_T == 0.0);
    CHECK(none.delta_D == 0.0);
}

TEST_CASE("heated system shifts the spin transitions") {
    SystemParams p = preset("high-frequency");
    SystemParams q = apply_heating(p, 2.0);
    double dD = 2.0 * p.heating.dT_per_watt * p.heating.dD_per_kelvin;
    CHECK(q.resonator.omega31 == doctest::Approx(p.resonator.omega31 + dD));
    CHECK(q.rates.k31 > p.rates.k31);
    CHECK(q.resonator.omega_m == p.resonator.omega_m);
}

}
