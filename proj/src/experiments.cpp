#include "nvcool/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "nvcool/errors.hpp"
#include "nvcool/moments.hpp"
#include "nvcool/rate_model.hpp"

namespace nvcool {

DickeState dicke_numbers(double pop11, double pop33, double n_spins) {
    double s = pop11 + pop33;
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("dicke_numbers: pop11 + pop33 must be positive");
    if (!(n_spins > 0.0)) throw DomainError("dicke_numbers: N must be positive");
    DickeState d;
    d.J0 = 0.5 * n_spins;
    d.p = pop33 / s;
    double m = 2.0 * d.p - 1.0;
    d.M_avg = d.J0 * m;
    double jj = m * m * d.J0 * (d.J0 + 1.0) + 6.0 * d.p * (d.p - 1.0) * d.J0;
    if (jj < 0.0) {
        jj = 0.0;
        d.clamped = true;
    }
    d.J_avg = 0.5 * (std::sqrt(1.0 + 4.0 * jj) - 1.0);
    return d;
}

double collective_coupling(double J, double g) {
    if (!(J >= 0.0)) throw DomainError("collective_coupling: J must be non-negative");
    return std::sqrt(2.0 * J) * g;
}

std::vector<std::size_t> find_peaks(const std::vector<double>& y, double rel_prominence) {
    std::vector<std::size_t> out;
    if (y.size() < 3) return out;
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        double left = y[i], right = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left = std::min(left, y[j]);
        }
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            if (y[j] > y[i]) break;
            right = std::min(right, y[j]);
        }
        if (y[i] - std::max(left, right) >= rel_prominence * range) out.push_back(i);
    }
    return out;
}

std::vector<double> Table::column(std::string_view col) const {
    auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw DomainError("table " + name + " has no column " + std::string(col));
    std::size_t k = it - columns.begin();
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[k]);
    return v;
}

const Table& ExperimentResult::table(std::string_view name) const {
    for (const Table& t : tables)
        if (t.name == name) return t;
    throw DomainError("result has no table " + std::string(name));
}

double ExperimentResult::summary_value(std::string_view key) const {
    for (const auto& [k, v] : summary)
        if (k == key) return v;
    throw DomainError("result has no summary entry " + std::string(key));
}

void ExperimentResult::warn(const std::string& w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
}

const char* model_label(ModelName m) {
    switch (m) {
        case ModelName::Cumulant: return "cumulant";
        case ModelName::Rate: return "rate";
        case ModelName::Reduced: return "reduced";
        case ModelName::Analytic: return "analytic";
    }
    return "?";
}

bool parse_model_name(std::string_view s, ModelName& out) {
    for (ModelName m : {ModelName::Cumulant, ModelName::Rate, ModelName::Reduced, ModelName::Analytic})
        if (s == model_label(m)) {
            out = m;
            return true;
        }
    return false;
}

const char* axis_label(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::PumpRate: return "xi";
        case SweepAxis::Power: return "power";
        case SweepAxis::DriveDetuning: return "drive_detuning";
        case SweepAxis::ModeDetuning: return "mode_detuning";
    }
    return "?";
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> v(n);
    double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (!(hi > lo) || n < 2) throw DomainError("linear grid needs lo < hi and n >= 2");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

void ExperimentSpec::validate() const {
    params.validate();
    solver.validate();
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!finite_nonneg(power)) throw DomainError("power must be finite and non-negative");
    if (!(t_on > 0.0) || !finite_nonneg(t_off)) throw DomainError("pulse durations must be positive");
    for (std::size_t i = 0; i < axis_values.size(); ++i) {
        if (!std::isfinite(axis_values[i])) throw DomainError("sweep axis values must be finite");
        if (i > 0 && !(axis_values[i] > axis_values[i - 1]))
            throw DomainError("sweep axis values must be strictly ascending");
    }
    if (grid_points < 0 || grid_points == 1) throw DomainError("grid_points must be 0 or at least 2");
    if (!(detuning_span_factor > 0.0) || !(mode_detuning_span > 0.0))
        throw DomainError("detuning spans must be positive");
    if (powers.empty()) throw DomainError("at least one laser power is required");
    for (double p : powers)
        if (!finite_nonneg(p)) throw DomainError("laser powers must be finite and non-negative");
    if (!std::isfinite(drive_amplitude)) throw DomainError("drive amplitude must be finite");
    if (!(drive_duration > 0.0) || !finite_nonneg(drive_tail)) throw DomainError("drive durations must be positive");
    if (models.empty()) throw DomainError("at least one model is required");
}

namespace {

// Runs f(i) for i in [0, n) on a pool of threads; the exception of the lowest
// failing index is rethrown so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SystemParams params_at_power(const ExperimentSpec& spec, double power) {
    SystemParams p = spec.heating ? apply_heating(spec.params, power) : spec.params;
    p.rates.xi = pump_rate_from_power(power, p.optics, p.constants);
    return p;
}

std::string power_tag(double p) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "P%gW", p);
    return buf;
}

std::vector<std::string> trajectory_columns() {
    std::vector<std::string> c{"t_s", "photon_n", "T_eff_K"};
    for (int i = 1; i <= 7; ++i) c.push_back("pop" + std::to_string(i));
    return c;
}

ModelKind kind_of(ModelName m) {
    switch (m) {
        case ModelName::Cumulant: return ModelKind::Cumulant;
        case ModelName::Rate: return ModelKind::Rate;
        case ModelName::Reduced: return ModelKind::Reduced;
        case ModelName::Analytic: break;
    }
    throw DomainError("analytic model has no state vector");
}

double omega_m(const SystemParams& p) { return p.resonator.omega_m; }

// Analytic ground populations and the adiabatic photon number.
struct AnalyticPoint {
    std::array<double, 7> pop{};
    double photon_n = 0.0;
};

AnalyticPoint analytic_point(double p11, const SystemParams& p) {
    AnalyticPoint a;
    double p33 = symmetric_upper_population(p11);
    a.pop = reduced_full_populations({p11, p33, p33}, p.rates.xi, p.rates);
    a.photon_n = adiabatic_photon_number(p11, p33, p);
    return a;
}

void add_trajectory_rows(Table& t, const Trajectory& tr) {
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<double> r{tr.times[i], tr.photon_n[i], tr.T_eff[i]};
        r.insert(r.end(), tr.pop[i].begin(), tr.pop[i].end());
        t.rows.push_back(std::move(r));
    }
}

// Index of the last sample at or before t.
std::size_t sample_at(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t * (1.0 + 1e-12));
    return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
}

}  // namespace

ExperimentResult run_cooling_pulse(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.experiment = "cool-dynamics";
    const SystemParams p = params_at_power(spec, spec.power);
    res.params = p;
    const double xi = p.rates.xi;
    Schedule sched{{{spec.t_on, xi}}};
    if (spec.t_off > 0.0) sched.phases.push_back({spec.t_off, 0.0});

    std::vector<Table> tables(spec.models.size());
    std::vector<std::vector<std::string>> warns(spec.models.size());
    parallel_for(spec.models.size(), spec.threads, [&](std::size_t k) {
        ModelName mn = spec.models[k];
        Table& t = tables[k];
        t.name = model_label(mn);
        t.columns = trajectory_columns();
        if (mn == ModelName::Analytic) {
            SystemParams dark = p;
            dark.rates.xi = 0.0;
            TildeRates kt = tilde_rates(xi, p.rates);
            const int ns = spec.solver.samples_per_phase;
            auto emit = [&](double t_abs, double p11, const SystemParams& ph) {
                AnalyticPoint a = analytic_point(p11, ph);
                std::vector<double> r{t_abs, a.photon_n, effective_temperature(omega_m(ph), a.photon_n, ph.constants)};
                r.insert(r.end(), a.pop.begin(), a.pop.end());
                t.rows.push_back(std::move(r));
            };
            for (int i = 0; i <= ns; ++i) {
                double tt = spec.t_on * i / ns;
                emit(tt, analytic_population_dynamics(tt, kt, p.rates, PumpPhase::Pumping), p);
            }
            if (spec.t_off > 0.0)
                for (int i = 1; i <= ns; ++i) {
                    double tt = spec.t_off * i / ns;
                    emit(spec.t_on + tt, analytic_population_dynamics(tt, kt, p.rates, PumpPhase::Dark), dark);
                }
            return;
        }
        Model m{kind_of(mn), p, {}};
        Trajectory tr = integrate(m, initial_state(m), sched, spec.solver);
        add_trajectory_rows(t, tr);
        warns[k] = tr.warnings;
        if (tr.max_pop_sum_error > 10.0 * spec.solver.rtol) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: population sum drifted by %.3g", model_label(mn),
                          tr.max_pop_sum_error);
            warns[k].push_back(buf);
        }
    });

    for (std::size_t k = 0; k < tables.size(); ++k) {
        const Table& t = tables[k];
        std::string m = t.name;
        std::vector<double> times = t.column("t_s"), n = t.column("photon_n"), T = t.column("T_eff_K");
        std::size_t on_end = sample_at(times, spec.t_on);
        res.summary.emplace_back(m + ".photon_n_end_pumping", n[on_end]);
        res.summary.emplace_back(m + ".T_eff_K_end_pumping", T[on_end]);
        for (int i = 1; i <= 3; ++i)
            res.summary.emplace_back(m + ".pop" + std::to_string(i) + "_end_pumping",
                                     t.rows[on_end][2 + i]);
        res.summary.emplace_back(m + ".min_T_eff_K", *std::min_element(T.begin(), T.end()));
        res.summary.emplace_back(m + ".photon_n_final", n.back());
        for (const std::string& w : warns[k]) res.warn(w);
    }
    res.tables = std::move(tables);
    return res;
}

ExperimentResult run_pump_sweep(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.experiment = "pump-sweep";
    res.params = params_at_power(spec, spec.power);

    std::vector<double> xi, power;
    const SystemParams& base = spec.params;
    if (spec.axis == SweepAxis::Power) {
        power = spec.axis_values.empty() ? log_grid(1e-3, 1e4, spec.grid_points ? spec.grid_points : 40)
                                         : spec.axis_values;
        for (double P : power) xi.push_back(pump_rate_from_power(P, base.optics, base.constants));
    } else {
        if (spec.axis != SweepAxis::PumpRate && spec.axis != SweepAxis::None)
            throw DomainError("pump sweep axis must be xi or power");
        xi = spec.axis_values.empty() ? log_grid(1.0, 1e7, spec.grid_points ? spec.grid_points : 40)
                                      : spec.axis_values;
        for (double x : xi) power.push_back(power_from_pump_rate(x, base.optics, base.constants));
    }
    const std::size_t npts = xi.size();
    const std::size_t nm = spec.models.size();

    struct Point {
        std::vector<std::array<double, 7>> pop;
        std::vector<double> n;
        std::vector<std::string> warnings;
    };
    std::vector<Point> pts(npts);
    parallel_for(npts, spec.threads, [&](std::size_t i) {
        SystemParams p = spec.heating ? apply_heating(base, power[i]) : base;
        p.rates.xi = xi[i];
        Point& pt = pts[i];
        pt.pop.resize(nm);
        pt.n.resize(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            ModelName mn = spec.models[k];
            if (mn == ModelName::Analytic) {
                try {
                    std::array<double, 3> g = analytic_ground_populations(tilde_rates(xi[i], p.rates), p.rates);
                    AnalyticPoint a = analytic_point(g[0], p);
                    pt.pop[k] = a.pop;
                    pt.n[k] = a.photon_n;
                } catch (const MasingThresholdError& e) {
                    pt.pop[k].fill(std::nan(""));
                    pt.n[k] = std::nan("");
                    pt.warnings.push_back(std::string("analytic: ") + e.what());
                }
                continue;
            }
            Model m{kind_of(mn), p, {}};
            SteadyStateResult ss = steady_state(m, initial_state(m), spec.solver, spec.steady);
            pt.pop[k] = state_populations(m, xi[i], ss.state);
            pt.n[k] = state_photon_number(m.kind, ss.state);
            for (const std::string& w : ss.warnings) pt.warnings.push_back(std::string(model_label(mn)) + ": " + w);
        }
    });

    Table t;
    t.name = "sweep";
    t.columns = {"xi_Hz", "P_W"};
    for (ModelName mn : spec.models) {
        std::string s = model_label(mn);
        for (std::string c : {"photon_n_", "T_eff_K_", "pop1_", "pop2_", "pop3_"}) t.columns.push_back(c + s);
    }
    t.columns.insert(t.columns.end(), {"J_over_N", "M_over_N", "dicke_clamped"});
    bool clamped_any = false;
    for (std::size_t i = 0; i < npts; ++i) {
        SystemParams p = spec.heating ? apply_heating(base, power[i]) : base;
        std::vector<double> r{xi[i], power[i]};
        for (std::size_t k = 0; k < nm; ++k) {
            double n = pts[i].n[k];
            r.push_back(n);
            r.push_back(std::isfinite(n) ? effective_temperature(omega_m(p), n, p.constants) : n);
            for (int j = 0; j < 3; ++j) r.push_back(pts[i].pop[k][j]);
        }
        double N = p.resonator.n_spins;
        DickeState d = dicke_numbers(pts[i].pop[0][0], pts[i].pop[0][2], N);
        clamped_any = clamped_any || d.clamped;
        r.insert(r.end(), {d.J_avg / N, d.M_avg / N, d.clamped ? 1.0 : 0.0});
        t.rows.push_back(std::move(r));
        for (const std::string& w : pts[i].warnings) res.warn(w);
    }
    if (clamped_any) res.warn("Dicke J(J+1) negative at some points; J clamped to 0 there");

    std::vector<double> minT(nm);
    for (std::size_t k = 0; k < nm; ++k) {
        std::string s = model_label(spec.models[k]);
        std::vector<double> n = t.column("photon_n_" + s), T = t.column("T_eff_K_" + s);
        std::size_t best = 0;
        for (std::size_t i = 1; i < npts; ++i)
            if (T[i] < T[best] || !std::isfinite(T[best])) best = i;
        minT[k] = T[best];
        res.summary.emplace_back(s + ".min_T_eff_K", T[best]);
        res.summary.emplace_back(s + ".min_photon_n", n[best]);
        res.summary.emplace_back(s + ".argmin_xi_Hz", xi[best]);
        res.summary.emplace_back(s + ".argmin_P_W", power[best]);
    }
    auto idx = [&](ModelName m) -> int {
        for (std::size_t k = 0; k < nm; ++k)
            if (spec.models[k] == m) return static_cast<int>(k);
        return -1;
    };
    int ic = idx(ModelName::Cumulant), ir = idx(ModelName::Rate);
    if (ic >= 0 && ir >= 0) {
        res.summary.emplace_back("cumulant_minus_rate_min_T_K", minT[ic] - minT[ir]);
        std::vector<double> nc = t.column("photon_n_cumulant"), nr = t.column("photon_n_rate");
        double worst = 0.0;
        for (std::size_t i = 0; i < npts; ++i) worst = std::max(worst, std::abs(nc[i] - nr[i]) / nr[i]);
        res.summary.emplace_back("max_rel_diff_photon_n_cumulant_rate", worst);
    }
    res.tables.push_back(std::move(t));
    return res;
}

namespace {

struct Cooled {
    SystemParams params;
    Eigen::VectorXd state;  // undriven cumulant steady state
    DickeState dicke;
    double coupling = 0.0;  // sqrt(2J) g
};

Cooled cool_at(const ExperimentSpec& spec, double power) {
    Cooled c;
    c.params = params_at_power(spec, power);
    Model m{ModelKind::Cumulant, c.params, {}};
    SteadyStateResult ss = steady_state(m, initial_state(m), spec.solver, spec.steady);
    c.state = ss.state;
    c.dicke = dicke_numbers(ss.state[0], ss.state[2], c.params.resonator.n_spins);
    c.coupling = collective_coupling(c.dicke.J_avg, c.params.resonator.g31);
    return c;
}

}  // namespace

ExperimentResult run_rabi_oscillation(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.experiment = "rabi-oscillation";
    res.params = params_at_power(spec, spec.power);
    const std::size_t np = spec.powers.size();
    std::vector<Table> tables(np);
    std::vector<Cooled> cooled(np);
    std::vector<std::vector<std::string>> warns(np);
    parallel_for(np, spec.threads, [&](std::size_t k) {
        Cooled c = cool_at(spec, spec.powers[k]);
        const SystemParams& p = c.params;
        Model m{ModelKind::DrivenCumulant, p,
                DriveParams::at_frequency(p, p.resonator.omega_m, spec.drive_amplitude, 0.0, spec.drive_duration)};
        Schedule sched{{{spec.drive_duration, p.rates.xi}}};
        if (spec.drive_tail > 0.0) sched.phases.push_back({spec.drive_tail, p.rates.xi});
        Eigen::VectorXd y0 = DrivenMomentState::embed(MomentState::unpack(c.state)).pack();
        Trajectory tr = integrate(m, y0, sched, spec.solver);
        Table& t = tables[k];
        t.name = power_tag(spec.powers[k]);
        t.columns = {"t_s", "photon_n", "photon_n_norm", "abs_a_sq", "T_eff_K", "pop1", "pop3"};
        double nmax = *std::max_element(tr.photon_n.begin(), tr.photon_n.end());
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            DrivenMomentState d = tr.driven(i);
            t.rows.push_back({tr.times[i], tr.photon_n[i], tr.photon_n[i] / nmax, std::norm(d.a_mean), tr.T_eff[i],
                              tr.pop[i][0], tr.pop[i][2]});
        }
        cooled[k] = std::move(c);
        warns[k] = tr.warnings;
    });
    for (std::size_t k = 0; k < np; ++k) {
        const Table& t = tables[k];
        std::vector<double> times = t.column("t_s"), n = t.column("photon_n");
        std::vector<double> drive_on(n.begin(), n.begin() + sample_at(times, spec.drive_duration) + 1);
        std::string tag = t.name;
        res.summary.emplace_back(tag + ".cooled_photon_n", n.front());
        // maxima while the drive is on; the turn-off point itself is not counted
        res.summary.emplace_back(tag + ".local_maxima", static_cast<double>(find_peaks(drive_on).size()));
        res.summary.emplace_back(tag + ".local_maxima_with_tail", static_cast<double>(find_peaks(n).size()));
        res.summary.emplace_back(tag + ".J_over_N", cooled[k].dicke.J_avg / cooled[k].params.resonator.n_spins);
        res.summary.emplace_back(tag + ".collective_coupling_rad_s", cooled[k].coupling);
        if (cooled[k].dicke.clamped) res.warn(tag + ": Dicke J clamped to 0");
        for (const std::string& w : warns[k]) res.warn(tag + ": " + w);
    }
    res.tables = std::move(tables);
    return res;
}

ExperimentResult run_rabi_splitting(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.experiment = "rabi-splitting";
    res.params = params_at_power(spec, spec.power);
    const std::size_t np = spec.powers.size();
    std::vector<Cooled> cooled(np);
    parallel_for(np, spec.threads, [&](std::size_t k) { cooled[k] = cool_at(spec, spec.powers[k]); });

    std::vector<double> det = spec.axis_values;
    if (det.empty()) {
        double gmax = 0.0;
        for (const Cooled& c : cooled) gmax = std::max(gmax, c.coupling);
        if (!(gmax > 0.0)) throw DomainError("collective coupling vanishes; give the detuning grid explicitly");
        double half = spec.detuning_span_factor * gmax;
        det = linear_grid(-half, half, spec.grid_points ? spec.grid_points : 201);
    }
    const std::size_t nd = det.size();

    // every point starts from the cooled state of its power, so results do not
    // depend on evaluation order
    std::vector<double> photon(np * nd);
    std::vector<std::vector<std::string>> warns(np * nd);
    SteadyStateOptions so = spec.steady;
    so.newton_first = true;
    parallel_for(np * nd, spec.threads, [&](std::size_t idx) {
        std::size_t k = idx / nd, j = idx % nd;
        const SystemParams& p = cooled[k].params;
        Model m{ModelKind::DrivenCumulant, p,
                DriveParams::at_frequency(p, p.resonator.omega_m + det[j], spec.drive_amplitude)};
        Eigen::VectorXd guess = DrivenMomentState::embed(MomentState::unpack(cooled[k].state)).pack();
        SteadyStateResult ss = steady_state(m, guess, spec.solver, so);
        photon[idx] = ss.state[MomentState::i_photon];
        warns[idx] = ss.warnings;
    });

    Table t;
    t.name = "splitting";
    t.columns = {"detuning_rad_s", "detuning_Hz"};
    for (double P : spec.powers) t.columns.push_back("photon_n_" + power_tag(P));
    for (std::size_t j = 0; j < nd; ++j) {
        std::vector<double> r{det[j], det[j] / two_pi};
        for (std::size_t k = 0; k < np; ++k) r.push_back(photon[k * nd + j]);
        t.rows.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < np; ++k) {
        std::string tag = power_tag(spec.powers[k]);
        std::vector<double> n(photon.begin() + k * nd, photon.begin() + (k + 1) * nd);
        std::vector<std::size_t> peaks = find_peaks(n);
        double sep = 0.0;
        if (peaks.size() >= 2) {
            std::vector<std::size_t> top = peaks;
            std::sort(top.begin(), top.end(), [&](std::size_t a, std::size_t b) { return n[a] > n[b]; });
            sep = std::abs(det[top[0]] - det[top[1]]);
        }
        double predicted = 2.0 * cooled[k].coupling;
        res.summary.emplace_back(tag + ".peaks", static_cast<double>(peaks.size()));
        res.summary.emplace_back(tag + ".peak_separation_rad_s", sep);
        res.summary.emplace_back(tag + ".predicted_separation_rad_s", predicted);
        res.summary.emplace_back(tag + ".separation_ratio", predicted > 0.0 ? sep / predicted : 0.0);
        res.summary.emplace_back(tag + ".J_over_N", cooled[k].dicke.J_avg / cooled[k].params.resonator.n_spins);
        res.summary.emplace_back(tag + ".cooled_photon_n", cooled[k].state[MomentState::i_photon]);
        if (cooled[k].dicke.clamped) res.warn(tag + ": Dicke J clamped to 0");
        for (std::size_t j = 0; j < nd; ++j)
            for (const std::string& w : warns[k * nd + j]) res.warn(tag + ": " + w);
    }
    res.tables.push_back(std::move(t));
    return res;
}

ExperimentResult run_mode_detuning_sweep(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.experiment = "mode-detuning-sweep";
    const SystemParams p = params_at_power(spec, spec.power);
    res.params = p;
    const double omega_D = 0.5 * (p.resonator.omega31 + p.resonator.omega21);
    std::vector<double> det = spec.axis_values.empty()
                                  ? linear_grid(-spec.mode_detuning_span, spec.mode_detuning_span,
                                                spec.grid_points ? spec.grid_points : 201)
                                  : spec.axis_values;

    // populations hardly depend on omega_m: one rate-model steady state at the preset mode frequency
    Model rm{ModelKind::Rate, p, {}};
    SteadyStateResult ss = steady_state(rm, initial_state(rm), spec.solver, spec.steady);
    for (const std::string& w : ss.warnings) res.warn("rate: " + w);
    std::array<double, 3> pop{ss.state[0], ss.state[1], ss.state[2]};

    auto at = [&](double omega) {
        SystemParams q = p;
        q.resonator.omega_m = omega;
        SystemParams only31 = q, only21 = q;
        only31.resonator.g21 = 0.0;
        only21.resonator.g31 = 0.0;
        return std::array<double, 4>{two_transition_photon_number(pop, q), two_transition_photon_number(pop, only31),
                                     two_transition_photon_number(pop, only21), q.thermal_photons()};
    };

    Table t;
    t.name = "mode_detuning";
    t.columns = {"detuning_rad_s", "detuning_Hz", "photon_n_two", "photon_n_31_only", "photon_n_21_only", "n_th",
                 "T_eff_K_two"};
    for (double d : det) {
        double w = omega_D + d;
        if (!(w > 0.0)) throw DomainError("mode detuning pushes omega_m below zero");
        auto v = at(w);
        t.rows.push_back({d, d / two_pi, v[0], v[1], v[2], v[3], effective_temperature(w, v[0], p.constants)});
    }
    auto r = at(p.resonator.omega31);
    res.summary.emplace_back("pop1", pop[0]);
    res.summary.emplace_back("pop2", pop[1]);
    res.summary.emplace_back("pop3", pop[2]);
    res.summary.emplace_back("resonant31.photon_n_two", r[0]);
    res.summary.emplace_back("resonant31.photon_n_31_only", r[1]);
    res.summary.emplace_back("resonant31.n_th", r[3]);
    res.summary.emplace_back("resonant31.off_resonant_contribution", (r[1] - r[0]) / r[3]);
    res.summary.emplace_back("resonant31.off_resonant_contribution_vs_two", (r[1] - r[0]) / r[0]);
    res.tables.push_back(std::move(t));
    return res;
}

}  // namespace nvcool
