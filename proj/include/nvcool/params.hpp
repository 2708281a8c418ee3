#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nvcool/units.hpp"

namespace nvcool {

// Level labels: 1 = |0>, 2 = |-1>, 3 = |+1> ground triplet; 4-6 excited
// triplet; 7 = singlet. All rates are in the internal angular unit.
struct NvRates {
    double xi = 0.0;
    double k_sp = 66e6;
    double k47 = 7.9e6;
    double k57 = 53e6;
    double k67 = 53e6;
    double k71 = 1e6;
    double k72 = 0.73e6;
    double k73 = 0.73e6;
    double k31 = 208.0;
    double k13 = 208.0;
    double k21 = 208.0;
    double k12 = 208.0;
    double chi2 = two_pi * 0.64e6;
    double chi3 = two_pi * 0.64e6;

    void validate() const;
};

struct ResonatorParams {
    double omega_m = two_pi * 9.22e9;
    double kappa = 1.88e6;
    double g31 = 0.69;
    double g21 = 0.69;
    double n_spins = 4e13;
    double omega31 = two_pi * 9.22e9;
    double omega21 = two_pi * 3.48e9;
    double bath_temperature = 293.0;

    void validate() const;
};

struct SystemParams {
    NvRates rates;
    ResonatorParams resonator;
    OpticsParams optics;
    PhysicalConstants constants;
    HeatingModel heating;

    double thermal_photons() const;  // n_th at omega_m and the bath temperature
    void validate() const;
};

struct HeatingResult {
    NvRates rates;
    double delta_T = 0.0;
    double delta_D = 0.0;
};

// Spin-lattice rates scaled by ((T_ini + dT)/T_ini)^exponent, dT linear in P.
HeatingResult heated_rates(const NvRates& base, double power, const HeatingModel& model = {});

// Heated copy of params: rates rescaled and spin transition frequencies shifted by dD.
SystemParams apply_heating(const SystemParams& p, double power);

std::vector<std::string> preset_names();
SystemParams preset(std::string_view name);

// Flat dotted-key view of SystemParams for config overrides and echo.
enum class UnitKind { Rate, Power, Temperature, Time, Length, Area, InverseLength,
                      Action, Entropy, Speed, Count, Dimensionless, RatePerKelvin,
                      KelvinPerWatt };

struct ParamEntry {
    std::string key;
    UnitKind unit;
    double* (*access)(SystemParams&) = nullptr;
};

const std::vector<ParamEntry>& param_registry();
const ParamEntry* find_param(std::string_view key);
double get_param(const SystemParams& p, std::string_view key);
void set_param(SystemParams& p, std::string_view key, double value);

const char* unit_label(UnitKind u);  // canonical suffix used in echoes and headers

// Canonical "key = %.17g" listing of every registry entry, and its FNV-1a hash.
std::string params_canonical_text(const SystemParams& p);
std::string params_hash(const SystemParams& p);
std::string fnv1a_hex(std::string_view text);

// Provenance note for a preset value, e.g. "2pi*9.22e9" or "f_c/Q, Q = 2900".
std::string provenance_note(std::string_view preset_name, std::string_view key);

}  // namespace nvcool
