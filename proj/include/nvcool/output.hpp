#pragma once

#include <string>
#include <vector>

#include "nvcool/config.hpp"
#include "nvcool/experiments.hpp"

namespace nvcool {

inline constexpr const char* kVersion = "0.1.0";

// '#' lines (experiment, hashes, summary), then the header row and %.17g rows.
// Contains nothing run-dependent beyond the numbers, so equal configs give equal bytes.
std::string csv_text(const ExperimentResult& r, const Table& t, const std::string& cfg_hash);

// JSON envelope: config echo and hash, code version, wall time, resolved
// parameters, warnings, summary and every table.
std::string envelope_json(const ExperimentResult& r, const RunConfig& cfg, double wall_time_s);

// Writes <dir>/<stem>.json and one <stem>[_<table>].csv per table; returns the paths.
std::vector<std::string> emit(const ExperimentResult& r, const RunConfig& cfg, double wall_time_s);

}  // namespace nvcool
