#include "nvcool/units.hpp"

#include <cmath>
#include <string>

#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite");
}

}  // namespace

void PhysicalConstants::validate() const {
    require_positive(planck_h, "planck_h");
    require_positive(boltzmann_kB, "boltzmann_kB");
    require_positive(light_speed_c, "light_speed_c");
}

double OpticsParams::fresnel_reflectance() const {
    double r = (refr_index_air - refr_index_diamond) / (refr_index_air + refr_index_diamond);
    return r * r;
}

void OpticsParams::validate() const {
    require_positive(wavelength, "wavelength");
    require_positive(cross_section, "cross_section");
    require_positive(beam_area, "beam_area");
    require_positive(thickness, "thickness");
    require_positive(absorption_coeff, "absorption_coeff");
    require_positive(refr_index_air, "refr_index_air");
    require_positive(refr_index_diamond, "refr_index_diamond");
    if (!(refr_index_diamond > refr_index_air))
        throw DomainError("refr_index_diamond must exceed refr_index_air");
}

void HeatingModel::validate() const {
    require_positive(t_initial, "t_initial");
    require_positive(raman_exponent, "raman_exponent");
    if (!std::isfinite(dT_per_watt) || dT_per_watt < 0.0)
        throw DomainError("dT_per_watt must be non-negative");
    if (!std::isfinite(dD_per_kelvin))
        throw DomainError("dD_per_kelvin must be finite");
}

double thermal_photon_number(double omega, double T, const PhysicalConstants& c) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("thermal_photon_number: omega must be positive");
    if (!(T >= 0.0) || !std::isfinite(T))
        throw DomainError("thermal_photon_number: temperature must be non-negative");
    if (T == 0.0) return 0.0;
    double x = c.reduced_planck() * omega / (c.boltzmann_kB * T);
    return 1.0 / std::expm1(x);
}

double effective_temperature(double omega, double n, const PhysicalConstants& c) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("effective_temperature: omega must be positive");
    if (!(n > 0.0) || !std::isfinite(n))
        throw DomainError("effective_temperature: occupation must be positive");
    return c.reduced_planck() * omega / (c.boltzmann_kB * std::log1p(1.0 / n));
}

namespace {

double pump_rate_per_watt(const OpticsParams& o, const PhysicalConstants& c) {
    o.validate();
    c.validate();
    double absorbed = -std::expm1(-o.thickness * o.absorption_coeff);
    return o.wavelength * o.cross_section /
           (c.planck_h * c.light_speed_c * o.beam_area * o.thickness * o.absorption_coeff) *
           absorbed * (1.0 - o.fresnel_reflectance());
}

}  // namespace

double pump_rate_from_power(double power, const OpticsParams& optics, const PhysicalConstants& c) {
    if (!(power >= 0.0) || !std::isfinite(power))
        throw DomainError("pump_rate_from_power: power must be non-negative");
    return pump_rate_per_watt(optics, c) * power;
}

double power_from_pump_rate(double xi, const OpticsParams& optics, const PhysicalConstants& c) {
    if (!(xi >= 0.0) || !std::isfinite(xi))
        throw DomainError("power_from_pump_rate: rate must be non-negative");
    return xi / pump_rate_per_watt(optics, c);
}

}  // namespace nvcool
