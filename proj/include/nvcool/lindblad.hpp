#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nvcool/cumulant.hpp"
#include "nvcool/params.hpp"
#include "nvcool/rodas.hpp"

namespace nvcool {

struct OracleDims {
    int n_spins = 1;      // 1 or 2
    int fock_cutoff = 8;  // number of Fock levels kept

    int hilbert_dim() const;
    void validate() const;
};

// Generator of the full master equation on vec(rho) (column-major), in the
// frame rotating at the drive frequency (or at omega_m when undriven).
struct Liouvillian {
    OracleDims dims;
    Eigen::SparseMatrix<cplx> matrix;

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

Liouvillian build_liouvillian(const SystemParams& params, const std::optional<DriveParams>& drive,
                              OracleDims dims);

struct DensityState {
    OracleDims dims;
    Eigen::MatrixXcd rho;

    // Diagonal spin populations (same for each spin) times a thermal Fock
    // distribution of mean nbar, renormalized on the truncated space.
    static DensityState product(OracleDims dims, const std::array<double, 7>& pops, double nbar);

    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
    void validate(double tol = 1e-10) const;
};

struct OracleMoments {
    double t = 0.0;
    std::array<double, 7> pop{};
    double photon_n = 0.0;
    cplx spin_photon{};   // <a^dag sigma_1^13>
    cplx spin_spin{};     // <sigma_1^31 sigma_2^13>, zero for one spin
    cplx a_mean{};
    cplx sigma13_mean{};
    double cutoff_population = 0.0;  // weight in the highest Fock level
};

OracleMoments oracle_moments(const DensityState& state);

struct OracleSeries {
    std::vector<OracleMoments> samples;
    std::vector<std::string> warnings;
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    long subspace_dim = 0;
    StepStats stats;
};

// Integrates the master equation restricted to the subspace of vec(rho)
// reachable from the initial support and records moments at the given times.
OracleSeries evolve(const DensityState& state, const Liouvillian& generator, const std::vector<double>& times,
                    double tol = 1e-10);

}  // namespace nvcool
