#pragma once

#include <Eigen/Dense>

#include <limits>

#include "nvcool/moments.hpp"
#include "nvcool/params.hpp"

namespace nvcool {

struct DriveParams {
    double amplitude = 0.0;      // Omega; the mode sees Omega * sqrt(kappa / 2)
    double detuning_spin = 0.0;  // omega31 - omega_d
    double detuning_mode = 0.0;  // omega_m - omega_d
    double t_start = 0.0;
    double t_stop = std::numeric_limits<double>::infinity();

    // Detunings for a drive at omega_d.
    static DriveParams at_frequency(const SystemParams& p, double omega_d, double amplitude,
                                    double t_start = 0.0,
                                    double t_stop = std::numeric_limits<double>::infinity());

    bool active(double t) const { return t >= t_start && t < t_stop; }
    double rate(double kappa) const;  // Omega * sqrt(kappa / 2)
    void validate(const SystemParams& p) const;
};

// Population rate matrix: R(i, j) is the rate j -> i, diagonal the total loss.
Eigen::Matrix<double, 7, 7> population_rate_matrix(const NvRates& r);

// Decay of the 1-3 coherence: xi + chi3 + (k12 + k13 + k31) / 2.
double coherence_decay_13(const NvRates& r);

MomentState undriven_rhs(const MomentState& state, const SystemParams& params);

DrivenMomentState driven_rhs(const DrivenMomentState& state, const SystemParams& params,
                             const DriveParams& drive, double t);

// Precomputed coefficients evaluating the packed right-hand sides.
class CumulantKernel {
public:
    explicit CumulantKernel(const SystemParams& p);

    void undriven(const double* y, double* dy) const;
    // eps is the drive rate Omega * sqrt(kappa / 2) (0 when off).
    void driven(const double* y, double* dy, double eps, double det_spin, double det_mode) const;

private:
    Eigen::Matrix<double, 7, 7> R_;
    double kappa_, nth_, n_, g_, delta_, gamma13_;
};

}  // namespace nvcool
