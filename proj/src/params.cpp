#include "nvcool/params.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>

#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

void require_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be non-negative and finite");
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite");
}

}  // namespace

void NvRates::validate() const {
    require_nonneg(xi, "rates.xi");
    require_nonneg(k_sp, "rates.k_sp");
    require_nonneg(k47, "rates.k47");
    require_nonneg(k57, "rates.k57");
    require_nonneg(k67, "rates.k67");
    require_nonneg(k71, "rates.k71");
    require_nonneg(k72, "rates.k72");
    require_nonneg(k73, "rates.k73");
    require_nonneg(k31, "rates.k31");
    require_nonneg(k13, "rates.k13");
    require_nonneg(k21, "rates.k21");
    require_nonneg(k12, "rates.k12");
    require_nonneg(chi2, "rates.chi2");
    require_nonneg(chi3, "rates.chi3");
}

void ResonatorParams::validate() const {
    require_positive(omega_m, "resonator.omega_m");
    require_positive(kappa, "resonator.kappa");
    require_nonneg(g31, "resonator.g31");
    require_nonneg(g21, "resonator.g21");
    if (!(n_spins >= 1.0) || !std::isfinite(n_spins))
        throw DomainError("resonator.n_spins must be >= 1");
    require_positive(omega31, "resonator.omega31");
    require_positive(omega21, "resonator.omega21");
    require_nonneg(bath_temperature, "resonator.bath_temperature");
}

double SystemParams::thermal_photons() const {
    return thermal_photon_number(resonator.omega_m, resonator.bath_temperature, constants);
}

void SystemParams::validate() const {
    rates.validate();
    resonator.validate();
    optics.validate();
    constants.validate();
    heating.validate();
}

HeatingResult heated_rates(const NvRates& base, double power, const HeatingModel& model) {
    if (!(power >= 0.0) || !std::isfinite(power))
        throw DomainError("heated_rates: power must be non-negative");
    model.validate();
    HeatingResult r;
    r.rates = base;
    r.delta_T = model.dT_per_watt * power;
    r.delta_D = model.dD_per_kelvin * r.delta_T;
    double scale = std::pow((model.t_initial + r.delta_T) / model.t_initial, model.raman_exponent);
    r.rates.k31 *= scale;
    r.rates.k13 *= scale;
    r.rates.k21 *= scale;
    r.rates.k12 *= scale;
    return r;
}

SystemParams apply_heating(const SystemParams& p, double power) {
    HeatingResult h = heated_rates(p.rates, power, p.heating);
    SystemParams out = p;
    out.rates = h.rates;
    out.resonator.omega31 += h.delta_D;
    out.resonator.omega21 += h.delta_D;
    return out;
}

std::vector<std::string> preset_names() { return {"high-frequency", "low-frequency"}; }

SystemParams preset(std::string_view name) {
    SystemParams p;
    if (name == "high-frequency") return p;
    if (name == "low-frequency") {
        p.rates.k31 = p.rates.k13 = p.rates.k21 = p.rates.k12 = 83.0;
        p.rates.chi2 = p.rates.chi3 = two_pi * 2.6e6;
        p.resonator.omega_m = two_pi * 2.872e9;
        p.resonator.kappa = 2.872e9 / 2900.0;
        p.resonator.g31 = 0.084;
        p.resonator.g21 = 0.084;
        p.resonator.n_spins = 1.6e15;
        p.resonator.omega31 = two_pi * 2.872e9;
        p.resonator.omega21 = two_pi * 2.867e9;
        return p;
    }
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

const std::vector<ParamEntry>& param_registry() {
#define NVCOOL_PARAM(KEY, UNIT, MEMBER) \
    ParamEntry{KEY, UnitKind::UNIT, [](SystemParams& p) -> double* { return &p.MEMBER; }}
    static const std::vector<ParamEntry> reg = {
        NVCOOL_PARAM("rates.xi", Rate, rates.xi),
        NVCOOL_PARAM("rates.k_sp", Rate, rates.k_sp),
        NVCOOL_PARAM("rates.k47", Rate, rates.k47),
        NVCOOL_PARAM("rates.k57", Rate, rates.k57),
        NVCOOL_PARAM("rates.k67", Rate, rates.k67),
        NVCOOL_PARAM("rates.k71", Rate, rates.k71),
        NVCOOL_PARAM("rates.k72", Rate, rates.k72),
        NVCOOL_PARAM("rates.k73", Rate, rates.k73),
        NVCOOL_PARAM("rates.k31", Rate, rates.k31),
        NVCOOL_PARAM("rates.k13", Rate, rates.k13),
        NVCOOL_PARAM("rates.k21", Rate, rates.k21),
        NVCOOL_PARAM("rates.k12", Rate, rates.k12),
        NVCOOL_PARAM("rates.chi2", Rate, rates.chi2),
        NVCOOL_PARAM("rates.chi3", Rate, rates.chi3),
        NVCOOL_PARAM("resonator.omega_m", Rate, resonator.omega_m),
        NVCOOL_PARAM("resonator.kappa", Rate, resonator.kappa),
        NVCOOL_PARAM("resonator.g31", Rate, resonator.g31),
        NVCOOL_PARAM("resonator.g21", Rate, resonator.g21),
        NVCOOL_PARAM("resonator.n_spins", Count, resonator.n_spins),
        NVCOOL_PARAM("resonator.omega31", Rate, resonator.omega31),
        NVCOOL_PARAM("resonator.omega21", Rate, resonator.omega21),
        NVCOOL_PARAM("resonator.bath_temperature", Temperature, resonator.bath_temperature),
        NVCOOL_PARAM("optics.wavelength", Length, optics.wavelength),
        NVCOOL_PARAM("optics.cross_section", Area, optics.cross_section),
        NVCOOL_PARAM("optics.beam_area", Area, optics.beam_area),
        NVCOOL_PARAM("optics.thickness", Length, optics.thickness),
        NVCOOL_PARAM("optics.absorption_coeff", InverseLength, optics.absorption_coeff),
        NVCOOL_PARAM("optics.refr_index_air", Dimensionless, optics.refr_index_air),
        NVCOOL_PARAM("optics.refr_index_diamond", Dimensionless, optics.refr_index_diamond),
        NVCOOL_PARAM("constants.planck_h", Action, constants.planck_h),
        NVCOOL_PARAM("constants.boltzmann_kB", Entropy, constants.boltzmann_kB),
        NVCOOL_PARAM("constants.light_speed_c", Speed, constants.light_speed_c),
        NVCOOL_PARAM("heating.dT_per_watt", KelvinPerWatt, heating.dT_per_watt),
        NVCOOL_PARAM("heating.dD_per_kelvin", RatePerKelvin, heating.dD_per_kelvin),
        NVCOOL_PARAM("heating.t_initial", Temperature, heating.t_initial),
        NVCOOL_PARAM("heating.raman_exponent", Dimensionless, heating.raman_exponent),
    };
#undef NVCOOL_PARAM
    return reg;
}

const ParamEntry* find_param(std::string_view key) {
    for (const auto& e : param_registry())
        if (e.key == key) return &e;
    return nullptr;
}

double get_param(const SystemParams& p, std::string_view key) {
    const ParamEntry* e = find_param(key);
    if (!e) throw DomainError("unknown parameter '" + std::string(key) + "'");
    return *e->access(const_cast<SystemParams&>(p));
}

void set_param(SystemParams& p, std::string_view key, double value) {
    const ParamEntry* e = find_param(key);
    if (!e) throw DomainError("unknown parameter '" + std::string(key) + "'");
    *e->access(p) = value;
}

const char* unit_label(UnitKind u) {
    switch (u) {
        case UnitKind::Rate: return "rad_s";
        case UnitKind::Power: return "W";
        case UnitKind::Temperature: return "K";
        case UnitKind::Time: return "s";
        case UnitKind::Length: return "m";
        case UnitKind::Area: return "m2";
        case UnitKind::InverseLength: return "1/m";
        case UnitKind::Action: return "J_s";
        case UnitKind::Entropy: return "J/K";
        case UnitKind::Speed: return "m/s";
        case UnitKind::Count: return "";
        case UnitKind::Dimensionless: return "";
        case UnitKind::RatePerKelvin: return "rad_s/K";
        case UnitKind::KelvinPerWatt: return "K/W";
    }
    return "";
}

std::string params_canonical_text(const SystemParams& p) {
    std::string out;
    char buf[64];
    for (const auto& e : param_registry()) {
        std::snprintf(buf, sizeof buf, "%.17g", get_param(p, e.key));
        out += e.key;
        out += " = ";
        out += buf;
        out += '\n';
    }
    return out;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string params_hash(const SystemParams& p) { return fnv1a_hex(params_canonical_text(p)); }

std::string provenance_note(std::string_view preset_name, std::string_view key) {
    static const std::map<std::string, std::string, std::less<>> common = {
        {"rates.xi", "set per run from laser power"},
        {"rates.k_sp", "verbatim 66e6"},
        {"rates.k47", "verbatim 7.9e6"},
        {"rates.k57", "verbatim 53e6"},
        {"rates.k67", "verbatim 53e6"},
        {"rates.k71", "verbatim 1e6"},
        {"rates.k72", "verbatim 0.73e6"},
        {"rates.k73", "verbatim 0.73e6"},
        {"optics.wavelength", "532 nm pump"},
        {"optics.cross_section", "NV absorption cross-section"},
        {"optics.beam_area", "pump spot area"},
        {"optics.thickness", "diamond thickness"},
        {"optics.absorption_coeff", "diamond absorption at 532 nm"},
        {"optics.refr_index_air", "air"},
        {"optics.refr_index_diamond", "diamond"},
        {"constants.planck_h", "CODATA exact"},
        {"constants.boltzmann_kB", "CODATA exact"},
        {"constants.light_speed_c", "CODATA exact"},
        {"heating.dT_per_watt", "linear laser heating"},
        {"heating.dD_per_kelvin", "2pi*(-0.074e6) per K"},
        {"heating.t_initial", "room temperature"},
        {"heating.raman_exponent", "two-phonon Raman T^5"},
        {"resonator.bath_temperature", "room temperature"},
    };
    static const std::map<std::string, std::string, std::less<>> hf = {
        {"rates.k31", "verbatim 208"}, {"rates.k13", "verbatim 208"},
        {"rates.k21", "verbatim 208"}, {"rates.k12", "verbatim 208"},
        {"rates.chi2", "2pi*0.64e6"}, {"rates.chi3", "2pi*0.64e6"},
        {"resonator.omega_m", "2pi*9.22e9"}, {"resonator.kappa", "verbatim 1.88e6"},
        {"resonator.g31", "verbatim 0.69"}, {"resonator.g21", "defaults to g31"},
        {"resonator.n_spins", "4e13"}, {"resonator.omega31", "2pi*9.22e9"},
        {"resonator.omega21", "2pi*3.48e9"},
    };
    static const std::map<std::string, std::string, std::less<>> lf = {
        {"rates.k31", "verbatim 83"}, {"rates.k13", "verbatim 83"},
        {"rates.k21", "verbatim 83"}, {"rates.k12", "verbatim 83"},
        {"rates.chi2", "2pi*2.6e6"}, {"rates.chi3", "2pi*2.6e6"},
        {"resonator.omega_m", "2pi*2.872e9"},
        {"resonator.kappa", "f_c/Q with Q = 2900 (the quoted 6.22e6 is inconsistent with Q)"},
        {"resonator.g31", "verbatim 0.084"}, {"resonator.g21", "defaults to g31"},
        {"resonator.n_spins", "1.6e15"}, {"resonator.omega31", "2pi*2.872e9"},
        {"resonator.omega21", "2pi*2.867e9"},
    };
    const auto& table = preset_name == "low-frequency" ? lf : hf;
    if (auto it = table.find(key); it != table.end()) return it->second;
    if (auto it = common.find(key); it != common.end()) return it->second;
    return "";
}

}  // namespace nvcool
