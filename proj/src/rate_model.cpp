#include "nvcool/rate_model.hpp"

#include <cmath>
#include <limits>

#include "nvcool/cumulant.hpp"
#include "nvcool/errors.hpp"

namespace nvcool {

ComplexDetuning ComplexDetuning::transition_31(const SystemParams& p) {
    const NvRates& r = p.rates;
    double width = 0.5 * (p.resonator.kappa + r.k12 + r.k13 + r.k31) + r.xi + r.chi3;
    return {{p.resonator.omega_m - p.resonator.omega31, width}};
}

ComplexDetuning ComplexDetuning::transition_21(const SystemParams& p) {
    const NvRates& r = p.rates;
    double width = 0.5 * (p.resonator.kappa + r.k13 + r.k12 + r.k21) + r.xi + r.chi2;
    return {{p.resonator.omega_m - p.resonator.omega21, width}};
}

double k_eet(double g, const ComplexDetuning& delta) {
    double im = delta.value.imag();
    if (!(im > 0.0)) throw DomainError("k_eet: complex detuning must have positive imaginary part");
    return 2.0 * g * g * im / std::norm(delta.value);
}

TildeRates tilde_rates(double xi, const NvRates& r) {
    if (!(xi >= 0.0)) throw DomainError("tilde_rates: pump rate must be non-negative");
    TildeRates t;
    double out7 = r.k71 + r.k72 + r.k73;
    double b1 = out7 > 0.0 ? r.k71 / out7 : 0.0;
    double b2 = out7 > 0.0 ? r.k72 / out7 : 0.0;
    double b3 = out7 > 0.0 ? r.k73 / out7 : 0.0;
    double e4 = xi * r.k47 / (r.k_sp + xi + r.k47);
    double e5 = xi * r.k57 / (r.k_sp + xi + r.k57);
    double e6 = xi * r.k67 / (r.k_sp + xi + r.k67);
    if (xi == 0.0) e4 = e5 = e6 = 0.0;
    t.k[0][0] = e4 * (1.0 - b1);
    t.k[1][0] = e5 * b1;
    t.k[2][0] = e6 * b1;
    t.k[0][1] = e4 * b2;
    t.k[1][1] = e5 * (1.0 - b2);
    t.k[2][1] = e6 * b2;
    t.k[0][2] = e4 * b3;
    t.k[1][2] = e5 * b3;
    t.k[2][2] = e6 * (1.0 - b3);
    return t;
}

RateState rate_rhs(const RateState& s, const SystemParams& params) {
    for (double v : s.pop)
        if (!std::isfinite(v)) throw IntegrationError("non-finite population", 0.0);
    if (!std::isfinite(s.photon_n)) throw IntegrationError("non-finite photon number", 0.0);

    Eigen::Matrix<double, 7, 7> R = population_rate_matrix(params.rates);
    Eigen::Map<const Eigen::Matrix<double, 7, 1>> p(s.pop.data());
    RateState d;
    Eigen::Map<Eigen::Matrix<double, 7, 1>> dp(d.pop.data());
    dp = R * p;

    double ke = k_eet(params.resonator.g31, ComplexDetuning::transition_31(params));
    double n = s.photon_n;
    double flow = ke * (s.pop[2] * (1.0 + n) - s.pop[0] * n);  // per spin, 3 -> 1 with photon emission
    d.pop[0] += flow;
    d.pop[2] -= flow;
    d.photon_n = params.resonator.kappa * (params.thermal_photons() - n) + params.resonator.n_spins * flow;
    return d;
}

ReducedState reduced_rate_rhs(const ReducedState& s, const TildeRates& kt, const SystemParams& params) {
    const NvRates& r = params.rates;
    double p1 = s.pop[0], p2 = s.pop[1], p3 = s.pop[2], n = s.photon_n;
    if (!std::isfinite(p1) || !std::isfinite(p2) || !std::isfinite(p3) || !std::isfinite(n))
        throw IntegrationError("non-finite reduced state", 0.0);
    double ke = k_eet(params.resonator.g31, ComplexDetuning::transition_31(params));
    double flow = ke * (p3 * (1.0 + n) - p1 * n);
    ReducedState d;
    d.pop[0] = -(kt(1, 1) + r.k12 + r.k13) * p1 + (kt(2, 1) + r.k21) * p2 + (kt(3, 1) + r.k31) * p3 + flow;
    d.pop[1] = -(kt(2, 2) + r.k21) * p2 + (kt(1, 2) + r.k12) * p1 + kt(3, 2) * p3;
    d.pop[2] = -(kt(3, 3) + r.k31) * p3 + (kt(1, 3) + r.k13) * p1 + kt(2, 3) * p2 - flow;
    d.photon_n = params.resonator.kappa * (params.thermal_photons() - n) + params.resonator.n_spins * flow;
    return d;
}

std::array<double, 7> reduced_full_populations(const std::array<double, 3>& ground, double xi,
                                               const NvRates& r) {
    std::array<double, 7> p{};
    p[0] = ground[0];
    p[1] = ground[1];
    p[2] = ground[2];
    p[3] = ground[0] * xi / (r.k_sp + xi + r.k47);
    p[4] = ground[1] * xi / (r.k_sp + xi + r.k57);
    p[5] = ground[2] * xi / (r.k_sp + xi + r.k67);
    double out7 = r.k71 + r.k72 + r.k73;
    p[6] = out7 > 0.0 ? (r.k47 * p[3] + r.k57 * p[4] + r.k67 * p[5]) / out7 : 0.0;
    // the reduced equations keep the ground manifold at unit weight; rescale so the
    // reconstructed seven-level distribution is normalized
    double total = 0.0;
    for (double v : p) total += v;
    if (total > 0.0)
        for (double& v : p) v /= total;
    return p;
}

double adiabatic_photon_number(double pop11, double pop33, const SystemParams& params) {
    double nk = params.resonator.n_spins * k_eet(params.resonator.g31, ComplexDetuning::transition_31(params));
    double kappa = params.resonator.kappa;
    double den = nk * (pop11 - pop33) + kappa;
    if (!(den > 0.0))
        throw MasingThresholdError("adiabatic photon number: population inversion beyond masing threshold");
    return (nk * pop11 + kappa * params.thermal_photons()) / den;
}

double two_transition_photon_number(const std::array<double, 3>& pop, const SystemParams& params) {
    double N = params.resonator.n_spins;
    double k31 = k_eet(params.resonator.g31, ComplexDetuning::transition_31(params));
    double k21 = params.resonator.g21 > 0.0
                     ? k_eet(params.resonator.g21, ComplexDetuning::transition_21(params))
                     : 0.0;
    double kappa = params.resonator.kappa;
    double den = N * (k31 * (pop[0] - pop[2]) + k21 * (pop[0] - pop[1])) + kappa;
    if (!(den > 0.0))
        throw MasingThresholdError("two-transition photon number: population inversion beyond masing threshold");
    return (N * (k31 + k21) * pop[0] + kappa * params.thermal_photons()) / den;
}

double weak_transfer_photon_number(double pop11, double pop33, const SystemParams& params) {
    double nk = params.resonator.n_spins * k_eet(params.resonator.g31, ComplexDetuning::transition_31(params));
    double kappa = params.resonator.kappa;
    double den = nk * (pop11 - pop33) + kappa;
    if (!(den > 0.0))
        throw MasingThresholdError("photon number: population inversion beyond masing threshold");
    return kappa * params.thermal_photons() / den;
}

AnalyticCoefficients analytic_coefficients(const TildeRates& kt, const NvRates& r) {
    AnalyticCoefficients c;
    c.A = kt(2, 2) + r.k21 + kt(1, 2) + r.k12;
    c.B = kt(3, 3) + r.k31 + kt(1, 3) + r.k13;
    c.C = kt(1, 2) + r.k12 - kt(3, 2);
    c.D = kt(1, 3) + r.k13 - kt(2, 3);
    return c;
}

std::array<double, 3> analytic_ground_populations(const TildeRates& kt, const NvRates& r) {
    AnalyticCoefficients c = analytic_coefficients(kt, r);
    double det = c.A * c.B - c.C * c.D;
    double scale = std::abs(c.A * c.B) + std::abs(c.C * c.D);
    if (!(std::abs(det) > 1e-14 * scale) || !std::isfinite(det))
        throw DegenerateRatesError("analytic ground populations: AB - CD vanishes");
    double s12 = kt(1, 2) + r.k12, s13 = kt(1, 3) + r.k13;
    double p22 = (c.B * s12 - c.C * s13) / det;
    double p33 = (c.A * s13 - c.D * s12) / det;
    return {1.0 - p22 - p33, p22, p33};
}

AnalyticCoefficients population_dynamics_coefficients(const TildeRates& kt, const NvRates& r,
                                                      PumpPhase phase) {
    AnalyticCoefficients c = analytic_coefficients(kt, r);
    double pump_rate = kt(1, 1) + r.k12 + r.k13 + kt(3, 1) + r.k31;
    double dark_rate = r.k12 + r.k13 + r.k31;
    double pumped = (kt(3, 1) + r.k31) / pump_rate;
    double thermal = r.k31 / dark_rate;
    if (phase == PumpPhase::Pumping) {
        c.rate = pump_rate;
        c.c0 = pumped;
        c.c1 = thermal;
    } else {
        c.rate = dark_rate;
        c.c0 = thermal;
        c.c1 = pumped;
    }
    return c;
}

double analytic_population_dynamics(double t, const TildeRates& kt, const NvRates& r, PumpPhase phase) {
    AnalyticCoefficients c = population_dynamics_coefficients(kt, r, phase);
    return (c.c1 - c.c0) * std::exp(-c.rate * t) + c.c0;
}

}  // namespace nvcool
