#pragma once

#include <string>
#include <vector>

#include "nvcool/params.hpp"

namespace nvcool {

struct OracleCheck {
    std::string name;
    double deviation = 0.0;  // max relative deviation over the gated channels
    double gate = 0.0;
    std::string detail;      // per-channel breakdown
    double wall_time_s = 0.0;

    bool passed() const { return deviation <= gate; }
};

// Cumulant-versus-exact comparisons at one and two spins. The fixtures take
// the rates of `base` and lower the bath temperature and the coupling so the
// exact problem fits a small Fock space; see the fixture notes in the source.
std::vector<OracleCheck> run_oracle_suite(const SystemParams& base);

}  // namespace nvcool
