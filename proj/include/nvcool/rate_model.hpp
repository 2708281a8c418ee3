#pragma once

#include <array>
#include <complex>

#include "nvcool/params.hpp"

namespace nvcool {

struct ComplexDetuning {
    std::complex<double> value;

    // (omega_m - omega31) + i[(kappa + k12 + k13 + k31)/2 + xi + chi3]
    static ComplexDetuning transition_31(const SystemParams& p);
    // (omega_m - omega21) + i[(kappa + k13 + k12 + k21)/2 + xi + chi2]
    static ComplexDetuning transition_21(const SystemParams& p);
};

// 2 g^2 Im(delta) / |delta|^2
double k_eet(double g, const ComplexDetuning& delta);

struct TildeRates {
    double k[3][3] = {};  // k[i-1][j-1]
    double operator()(int i, int j) const { return k[i - 1][j - 1]; }
};

TildeRates tilde_rates(double xi, const NvRates& rates);

// Seven populations plus photon number, spin-photon correlation eliminated.
struct RateState {
    std::array<double, 7> pop{};
    double photon_n = 0.0;
};

RateState rate_rhs(const RateState& state, const SystemParams& params);

// Three ground populations plus photon number with the excited states eliminated.
struct ReducedState {
    std::array<double, 3> pop{};
    double photon_n = 0.0;
};

ReducedState reduced_rate_rhs(const ReducedState& state, const TildeRates& tilde,
                              const SystemParams& params);

// Excited and singlet populations slaved to the ground populations; the result is
// normalized to unit total.
std::array<double, 7> reduced_full_populations(const std::array<double, 3>& ground, double xi,
                                               const NvRates& rates);

double adiabatic_photon_number(double pop11, double pop33, const SystemParams& params);

double two_transition_photon_number(const std::array<double, 3>& pop, const SystemParams& params);

// Photon number with the numerator reduced to kappa n_th (valid when N k_eet << kappa n_th).
double weak_transfer_photon_number(double pop11, double pop33, const SystemParams& params);

struct AnalyticCoefficients {
    double A = 0, B = 0, C = 0, D = 0;
    double c0 = 0, c1 = 0;
    double rate = 0;  // exponent of the population relaxation
};

AnalyticCoefficients analytic_coefficients(const TildeRates& tilde, const NvRates& rates);

std::array<double, 3> analytic_ground_populations(const TildeRates& tilde, const NvRates& rates);

enum class PumpPhase { Pumping, Dark };

// c0, c1 and the exponent for the requested phase. tilde is taken at the
// pumping rate; the dark phase starts from the pumped steady value.
AnalyticCoefficients population_dynamics_coefficients(const TildeRates& tilde, const NvRates& rates,
                                                      PumpPhase phase);

double analytic_population_dynamics(double t, const TildeRates& tilde, const NvRates& rates,
                                    PumpPhase phase);

// (1 - pop11) / 2
inline double symmetric_upper_population(double pop11) { return 0.5 * (1.0 - pop11); }

}  // namespace nvcool
