// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nvcool/experiments.hpp"
#include "nvcool/integrate.hpp"
#include "nvcool/oracle_suite.hpp"
#include "nvcool/rate_model.hpp"

using namespace nvcool;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    // records one measured quantity against its window
    void check(const char* name, double value, double lo, double hi) {
        bool ok = value >= lo && value <= hi;
        pass = pass && ok;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s%s=%.6g [%.6g, %.6g]%s", detail.empty() ? "" : "; ", name, value, lo, hi,
                      ok ? "" : " !");
        detail += buf;
    }
    void around(const char* name, double value, double target, double tol) {
        check(name, value, target - tol, target + tol);
    }
    void flag(const char* name, bool ok) {
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + std::string(name) + (ok ? " ok" : " FAILED");
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SystemParams at_power(const char* name, double P) {
    SystemParams p = preset(name);
    p.rates.xi = pump_rate_from_power(P, p.optics, p.constants);
    return p;
}

double steady_photon(const SystemParams& p, ModelKind k) {
    Model m{k, p, {}};
    return state_photon_number(k, steady_state(m, initial_state(m)).state);
}

double pop_sum_error(const Trajectory& tr) {
    double worst = 0.0;
    for (const auto& pop : tr.pop) {
        double s = 0.0;
        for (double v : pop) s += v;
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

Outcome thermal_anchors() {
    Outcome o;
    o.around("n_th(9.22 GHz)", thermal_photon_number(two_pi * 9.22e9, 293.0), 661.0, 1.0);
    o.around("n_th(2.872 GHz)", thermal_photon_number(two_pi * 2.872e9, 293.0), 2125.0, 2.0);
    return o;
}

Outcome cooling_dynamics() {
    Outcome o;
    SystemParams p = at_power("high-frequency", 2.0);
    double w = p.resonator.omega_m;
    double nc = steady_photon(p, ModelKind::Cumulant), nr = steady_photon(p, ModelKind::Rate);
    o.check("cumulant n", nc, 290.0, 300.0);
    o.around("cumulant T_K", effective_temperature(w, nc, p.constants), 132.0, 3.0);
    o.around("rate n", nr, 257.0, 5.0);
    o.around("rate T_K", effective_temperature(w, nr, p.constants), 114.0, 3.0);
    auto t0 = std::chrono::steady_clock::now();
    Model m{ModelKind::Cumulant, p, {}};
    integrate(m, initial_state(m), Schedule::pulse(p.rates.xi, 20e-3, 20e-3));
    o.check("trajectory_s", seconds_since(t0), 0.0, 30.0);
    return o;
}

Outcome steady_sweep() {
    Outcome o;
    ExperimentSpec s;
    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult r = run_pump_sweep(s);
    double secs = seconds_since(t0);
    double tc = r.summary_value("cumulant.min_T_eff_K"), tr = r.summary_value("rate.min_T_eff_K");
    o.around("cumulant min T_K", tc, 116.0, 3.0);
    o.check("argmin xi_Hz", r.summary_value("cumulant.argmin_xi_Hz"), 1e5 / 3, 3e5);
    o.around("rate min T_K", tr, 87.0, 4.0);
    o.around("gap_K", tc - tr, 29.0, 5.0);
    o.check("sweep_s", secs, 0.0, 300.0);
    return o;
}

Outcome ensemble_scaling() {
    Outcome o;
    ExperimentSpec s;
    s.params.resonator.n_spins = 1.6e15;
    s.models = {ModelName::Cumulant};
    ExperimentResult r = run_pump_sweep(s);
    o.around("n at optimal xi", r.summary_value("cumulant.min_photon_n"), 71.0, 3.0);
    o.around("T_K", r.summary_value("cumulant.min_T_eff_K"), 32.0, 2.0);
    return o;
}

Outcome low_frequency() {
    Outcome o;
    SystemParams p = at_power("low-frequency", 2.0);
    o.around("2 W T_K", effective_temperature(p.resonator.omega_m, steady_photon(p, ModelKind::Cumulant), p.constants),
             188.0, 3.0);
    ExperimentSpec s;
    s.params = preset("low-frequency");
    ExperimentResult r = run_pump_sweep(s);
    o.around("sweep min T_K", r.summary_value("cumulant.min_T_eff_K"), 170.0, 3.0);
    o.check("max pointwise |n_c/n_r - 1|", r.summary_value("max_rel_diff_photon_n_cumulant_rate"), 0.0, 0.01);
    return o;
}

Outcome dicke_anchors() {
    Outcome o;
    DickeState d = dicke_numbers(0.73, 0.13, 4e13);
    o.around("J/N", d.J_avg / 4e13, 0.35, 0.01);
    double g = preset("high-frequency").resonator.g31;
    double f13 = collective_coupling(d.J_avg, g) / two_pi;
    double f14 = collective_coupling(dicke_numbers(0.73, 0.13, 4e14).J_avg, g) / two_pi;
    o.check("sqrt(2J)g/2pi @4e13 MHz", f13 / 1e6, 0.57 * 0.95, 0.57 * 1.05);
    o.check("sqrt(2J)g/2pi @4e14 MHz", f14 / 1e6, 1.8 * 0.95, 1.8 * 1.05);
    return o;
}

Outcome cqed_gates() {
    Outcome o;
    ExperimentSpec s;
    s.params.resonator.n_spins = 4e14;
    ExperimentResult split = run_rabi_splitting(s);
    o.check("peaks @0.01 W", split.summary_value("P0.01W.peaks"), 1, 1);
    for (const char* tag : {"P1W", "P10W"}) {
        std::string t(tag);
        o.check((t + " peaks").c_str(), split.summary_value(t + ".peaks"), 2, 2);
    }
    double sep1 = split.summary_value("P1W.peak_separation_rad_s");
    double sep10 = split.summary_value("P10W.peak_separation_rad_s");
    o.flag("separation grows with power", sep10 > sep1);
    o.check("P10W separation / 2sqrt(2J)g", split.summary_value("P10W.separation_ratio"), 0.8, 1.2);
    s.solver.samples_per_phase = 500;
    ExperimentResult osc = run_rabi_oscillation(s);
    o.check("maxima @10 W", osc.summary_value("P10W.local_maxima"), 2, 1e9);
    o.check("maxima @0.01 W", osc.summary_value("P0.01W.local_maxima"), 0, 0);
    return o;
}

Outcome two_transition() {
    Outcome o;
    ExperimentSpec s;
    s.params = preset("low-frequency");
    ExperimentResult r = run_mode_detuning_sweep(s);
    o.around("off-resonant share", r.summary_value("resonant31.off_resonant_contribution"), 0.05, 0.01);
    return o;
}

Outcome oracle_gates() {
    Outcome o;
    for (const OracleCheck& c : run_oracle_suite(preset("high-frequency"))) o.check(c.name.c_str(), c.deviation, 0.0, c.gate);
    return o;
}

Outcome properties() {
    Outcome o;
    ExperimentSpec s;
    s.t_on = s.t_off = 5e-3;
    s.models = {ModelName::Cumulant, ModelName::Rate, ModelName::Reduced};
    SystemParams p = at_power("high-frequency", 2.0);
    double worst = 0.0;
    for (ModelName mn : s.models) {
        Model m{mn == ModelName::Cumulant ? ModelKind::Cumulant : mn == ModelName::Rate ? ModelKind::Rate
                                                                                        : ModelKind::Reduced,
                p, {}};
        worst = std::max(worst, pop_sum_error(integrate(m, initial_state(m), Schedule::pulse(p.rates.xi, 5e-3, 5e-3),
                                                        s.solver)));
    }
    SystemParams q = p;
    q.resonator.n_spins = 4e14;
    Model d{ModelKind::DrivenCumulant, q, DriveParams::at_frequency(q, q.resonator.omega_m, two_pi * 9.7e5, 0, 5e-6)};
    worst = std::max(worst, pop_sum_error(integrate(d, initial_state(d), Schedule::constant(q.rates.xi, 1e-5), s.solver)));
    o.check("population drift / tol", worst / s.solver.rtol, 0.0, 10.0);

    SystemParams th = preset("high-frequency");
    th.resonator.g31 = 0.0;
    Model m{ModelKind::Cumulant, th, {}};
    Eigen::VectorXd y0 = initial_state(m);
    double drift = (evolve_to(m, y0, 1.0) - y0).cwiseAbs().maxCoeff() / y0.cwiseAbs().maxCoeff();
    o.check("xi=0 fixed point drift", drift, 0.0, s.solver.rtol);

    double inv = 0.0;
    for (double f : {2.872e9, 9.22e9})
        for (double T = 0.1; T < 1000.0; T *= 1.37)
            inv = std::max(inv, std::abs(effective_temperature(two_pi * f, thermal_photon_number(two_pi * f, T)) / T - 1));
    o.check("T(n(T)) rel err", inv, 0.0, 1e-12);

    HeatingModel hm;
    hm.dT_per_watt = 125.0;
    NvRates r;
    r.k31 = 26.0;
    r.k21 = 83.0;
    HeatingResult h = heated_rates(r, 1.0, hm);
    o.around("26 Hz heated", h.rates.k31, 154.0, 2.0);
    o.around("83 Hz heated", h.rates.k21, 490.0, 2.0);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{
        {"1 thermal anchors", thermal_anchors},
        {"2 cooling dynamics at 2 W", cooling_dynamics},
        {"3 steady-state pump sweep", steady_sweep},
        {"4 ensemble scaling N=1.6e15", ensemble_scaling},
        {"5 low-frequency replication", low_frequency},
        {"6 Dicke and coupling anchors", dicke_anchors},
        {"7 CQED qualitative gates", cqed_gates},
        {"8 two-transition contribution", two_transition},
        {"9 oracle gates", oracle_gates},
        {"10 property suites", properties},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %-32s (%.1f s)  %s\n", o.pass ? "PASS" : "FAIL", c.name, seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
