#include <doctest.h>

#include <cmath>

#include "nvcool/errors.hpp"
#include "nvcool/experiments.hpp"

using namespace nvcool;

TEST_SUITE("experiments") {

TEST_CASE("Dicke numbers and collective coupling") {
    DickeState d = dicke_numbers(0.73, 0.13, 4e13);
    CHECK(std::abs(d.J_avg / 4e13 - 0.35) <= 0.01);
    CHECK(!d.clamped);
    CHECK(std::abs(d.M_avg) <= d.J_avg * (1.0 + 1e-9));
    double g = 0.69;
    double hz13 = collective_coupling(dicke_numbers(0.73, 0.13, 4e13).J_avg, g) / two_pi;
    double hz14 = collective_coupling(dicke_numbers(0.73, 0.13, 4e14).J_avg, g) / two_pi;
    CHECK(std::abs(hz13 / 0.57e6 - 1.0) <= 0.05);
    CHECK(std::abs(hz14 / 1.8e6 - 1.0) <= 0.05);

    DickeState half = dicke_numbers(0.4, 0.4, 1e6);
    CHECK(half.clamped);
    CHECK(half.J_avg == 0.0);
    CHECK(half.M_avg == 0.0);
    CHECK_THROWS_AS(dicke_numbers(0.0, 0.0, 10.0), DomainError);
    CHECK_THROWS_AS(collective_coupling(-1.0, 1.0), DomainError);
}

TEST_CASE("peak finder") {
    std::vector<double> one{0, 1, 3, 1, 0};
    CHECK(find_peaks(one) == std::vector<std::size_t>{2});
    std::vector<double> two{0, 2, 1, 2, 0};
    CHECK(find_peaks(two) == std::vector<std::size_t>{1, 3});
    std::vector<double> ripple{0, 1, 0.99999, 1, 5, 0};
    CHECK(find_peaks(ripple) == std::vector<std::size_t>{4});
    CHECK(find_peaks({1, 2, 3, 4}).empty());
    CHECK(find_peaks({2, 2, 2}).empty());
}

TEST_CASE("grids") {
    auto g = log_grid(1.0, 1e7, 40);
    REQUIRE(g.size() == 40);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1e7);
    CHECK(g[1] / g[0] == doctest::Approx(g[39] / g[38]));
    auto l = linear_grid(-1.0, 1.0, 201);
    CHECK(l[100] == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
    CHECK_THROWS_AS(linear_grid(1.0, 1.0, 3), DomainError);
}

TEST_CASE("experiment settings validation") {
    ExperimentSpec s;
    s.validate();
    s.powers.clear();
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = ExperimentSpec{};
    s.axis_values = {3.0, 1.0};
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = ExperimentSpec{};
    s.t_on = 0.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("cooling pulse schema and consistency") {
    ExperimentSpec s;
    s.models = {ModelName::Cumulant, ModelName::Rate, ModelName::Reduced, ModelName::Analytic};
    s.t_on = 5e-3;
    s.t_off = 5e-3;
    s.solver.samples_per_phase = 100;
    ExperimentResult r = run_cooling_pulse(s);
    REQUIRE(r.tables.size() == 4);
    std::vector<std::string> cols{"t_s", "photon_n", "T_eff_K", "pop1", "pop2", "pop3", "pop4", "pop5", "pop6", "pop7"};
    for (const Table& t : r.tables) {
        CHECK(t.columns == cols);
        CHECK(t.rows.size() == 201);
    }
    // the reduced model and its closed form follow the same ground populations
    auto a = r.table("analytic").column("pop1"), b = r.table("reduced").column("pop1");
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-3));
    CHECK(r.summary_value("rate.photon_n_end_pumping") < r.summary_value("cumulant.photon_n_end_pumping"));
    CHECK(r.params.rates.xi == doctest::Approx(pump_rate_from_power(2.0)));
}

TEST_CASE("sweep results do not depend on the thread count") {
    ExperimentSpec s;
    s.axis = SweepAxis::PumpRate;
    s.axis_values = log_grid(10.0, 1e6, 9);
    s.threads = 1;
    ExperimentResult a = run_pump_sweep(s);
    s.threads = 4;
    ExperimentResult b = run_pump_sweep(s);
    CHECK(a.tables[0].rows == b.tables[0].rows);
    CHECK(a.summary == b.summary);
    auto P = a.tables[0].column("P_W");
    CHECK(P[0] == doctest::Approx(power_from_pump_rate(10.0)));
}

TEST_CASE("power axis and heating") {
    ExperimentSpec s;
    s.axis = SweepAxis::Power;
    s.axis_values = {0.5, 2.0, 8.0};
    s.models = {ModelName::Rate, ModelName::Analytic};
    s.heating = true;
    ExperimentResult r = run_pump_sweep(s);
    auto xi = r.tables[0].column("xi_Hz");
    CHECK(xi[1] == doctest::Approx(pump_rate_from_power(2.0)));
    ExperimentSpec cold = s;
    cold.heating = false;
    ExperimentResult c = run_pump_sweep(cold);
    CHECK(r.tables[0].column("photon_n_rate")[2] > c.tables[0].column("photon_n_rate")[2]);
}

TEST_CASE("mode detuning sweep shows one dip per transition") {
    ExperimentSpec s = ExperimentSpec{};
    s.params = preset("low-frequency");
    ExperimentResult r = run_mode_detuning_sweep(s);
    const Table& t = r.table("mode_detuning");
    auto det = t.column("detuning_rad_s");
    auto nth = t.column("n_th");
    auto dips_of = [&](const char* col) {
        auto n = t.column(col);
        std::vector<double> neg(n.size());
        for (std::size_t i = 0; i < n.size(); ++i) neg[i] = -n[i] / nth[i];
        return find_peaks(neg);
    };
    double half = 0.5 * (s.params.resonator.omega31 - s.params.resonator.omega21);
    double step = det[1] - det[0];
    auto d31 = dips_of("photon_n_31_only"), d21 = dips_of("photon_n_21_only");
    REQUIRE(d31.size() == 1);
    REQUIRE(d21.size() == 1);
    CHECK(std::abs(det[d31[0]] - half) <= step);
    CHECK(std::abs(det[d21[0]] + half) <= step);
    // overlapping lines pull the combined minima toward each other
    auto dips = dips_of("photon_n_two");
    REQUIRE(dips.size() == 2);
    CHECK(det[dips[0]] == doctest::Approx(-det[dips[1]]).epsilon(1e-9));
    CHECK(det[dips[1]] > 0.0);
    CHECK(det[dips[1]] <= half + step);
    CHECK(std::abs(r.summary_value("resonant31.off_resonant_contribution") - 0.05) <= 0.01);
}

}
