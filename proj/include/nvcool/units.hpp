#pragma once

#include <numbers>

namespace nvcool {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct PhysicalConstants {
    double planck_h = 6.62607015e-34;
    double boltzmann_kB = 1.380649e-23;
    double light_speed_c = 299792458.0;

    double reduced_planck() const { return planck_h / two_pi; }
    void validate() const;
};

struct OpticsParams {
    double wavelength = 532e-9;
    double cross_section = 3.1e-21;
    double beam_area = 1.76e-6;
    double thickness = 1.5e-3;
    double absorption_coeff = 2.3e3;
    double refr_index_air = 1.0;
    double refr_index_diamond = 2.42;

    double fresnel_reflectance() const;
    void validate() const;
};

struct HeatingModel {
    double dT_per_watt = 87.5;
    double dD_per_kelvin = -two_pi * 0.074e6;
    double t_initial = 293.0;
    double raman_exponent = 5.0;

    void validate() const;
};

// Mean occupation [exp(hbar w / kB T) - 1]^-1; zero at T = 0.
double thermal_photon_number(double omega, double T, const PhysicalConstants& c = {});

// Inverse of thermal_photon_number in T.
double effective_temperature(double omega, double n, const PhysicalConstants& c = {});

double pump_rate_from_power(double power, const OpticsParams& optics = {},
                            const PhysicalConstants& c = {});

// Inverse of pump_rate_from_power.
double power_from_pump_rate(double xi, const OpticsParams& optics = {},
                            const PhysicalConstants& c = {});

}  // namespace nvcool
