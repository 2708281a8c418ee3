#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace nvcool {

using cplx = std::complex<double>;

struct SystemParams;

// Undriven second-order moments of one representative spin and the mode.
// Packed layout: pop[0..6], photon_n, Re/Im spin_photon, Re/Im spin_spin.
struct MomentState {
    static constexpr int size = 12;
    static constexpr int i_photon = 7;
    static constexpr int i_spin_photon = 8;
    static constexpr int i_spin_spin = 10;

    std::array<double, 7> pop{};  // pop[0] is level 1
    double photon_n = 0.0;
    cplx spin_photon{};  // <a^dag sigma^13>
    cplx spin_spin{};    // <sigma_1^31 sigma_2^13>

    // pop = (1/3, 1/3, 1/3, 0, 0, 0, 0), photon_n = n_th, no correlations.
    static MomentState thermal(const SystemParams& p);

    double pop_sum() const;
    Eigen::VectorXd pack() const;
    static MomentState unpack(const Eigen::VectorXd& y);
};

// Rotating-frame moments with a coherent drive. The first twelve packed
// entries are the MomentState layout. a_pop and pop_sigma13 run over all
// seven levels and the pop-pop covariance is kept as the packed upper
// triangle, which closes the set under the level rate matrix.
struct DrivenMomentState {
    static constexpr int size = 78;
    static constexpr int i_a = 12;
    static constexpr int i_s = 14;
    static constexpr int i_aa = 16;
    static constexpr int i_w = 18;
    static constexpr int i_v = 20;   // 7 complex
    static constexpr int i_u = 34;
    static constexpr int i_q = 36;   // 7 complex
    static constexpr int i_cov = 50; // 28 reals

    MomentState base;
    cplx a_mean{};           // <a>
    cplx sigma13_mean{};     // <sigma^13>
    cplx aa{};               // <a a>
    cplx a_sigma13{};        // <a sigma^13>
    std::array<cplx, 7> a_pop{};        // <a sigma^ii>
    cplx sigma13_sigma13{};             // <sigma_1^13 sigma_2^13>
    std::array<cplx, 7> pop_sigma13{};  // <sigma_1^ii sigma_2^13>
    Eigen::Matrix<double, 7, 7> pop_cov = Eigen::Matrix<double, 7, 7>::Zero();  // <s1^ii s2^jj> - p_i p_j

    static DrivenMomentState embed(const MomentState& m);
    Eigen::VectorXd pack() const;
    static DrivenMomentState unpack(const Eigen::VectorXd& y);

    static int cov_index(int i, int j);  // packed position of (i, j), i, j in 0..6
};

}  // namespace nvcool
