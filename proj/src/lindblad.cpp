#include "nvcool/lindblad.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include "nvcool/errors.hpp"
#include "nvcool/rodas.hpp"

namespace nvcool {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using Trip = Eigen::Triplet<cplx>;

int pow7(int n) { return n == 1 ? 7 : 49; }

// Basis index ((s1 * 7 + s2) * F + n); spin levels 0-based.
struct Basis {
    int spins, F, D;
    explicit Basis(const OracleDims& d) : spins(d.n_spins), F(d.fock_cutoff), D(d.hilbert_dim()) {}
    int spin_level(int idx, int k) const {
        int s = idx / F;
        return spins == 1 ? s : (k == 0 ? s / 7 : s % 7);
    }
    int fock(int idx) const { return idx % F; }
    int with_spin(int idx, int k, int level) const {
        int s = idx / F, n = idx % F;
        if (spins == 1) return level * F + n;
        int s1 = s / 7, s2 = s % 7;
        if (k == 0) s1 = level; else s2 = level;
        return (s1 * 7 + s2) * F + n;
    }
};

// |i><j| on spin k (levels 1-based).
SpMat spin_op(const Basis& b, int k, int i, int j) {
    std::vector<Trip> t;
    for (int idx = 0; idx < b.D; ++idx)
        if (b.spin_level(idx, k) == j - 1) t.emplace_back(b.with_spin(idx, k, i - 1), idx, 1.0);
    SpMat m(b.D, b.D);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SpMat annihilation(const Basis& b) {
    std::vector<Trip> t;
    for (int idx = 0; idx < b.D; ++idx) {
        int n = b.fock(idx);
        if (n > 0) t.emplace_back(idx - 1, idx, std::sqrt(double(n)));
    }
    SpMat m(b.D, b.D);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SpMat identity(int d) {
    SpMat id(d, d);
    id.setIdentity();
    return id;
}

cplx expectation(const SpMat& op, const Eigen::MatrixXcd& rho) {
    cplx s = 0.0;
    for (int c = 0; c < op.outerSize(); ++c)
        for (SpMat::InnerIterator it(op, c); it; ++it) s += it.value() * rho(c, it.row());
    return s;
}

}  // namespace

int OracleDims::hilbert_dim() const { return pow7(n_spins) * fock_cutoff; }

void OracleDims::validate() const {
    if (n_spins != 1 && n_spins != 2) throw DomainError("oracle supports one or two spins");
    if (fock_cutoff < 2) throw DomainError("oracle Fock cutoff must be at least 2");
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
    const int D = dims.hilbert_dim();
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
    Eigen::VectorXcd out = matrix * v;
    return Eigen::Map<Eigen::MatrixXcd>(out.data(), D, D);
}

Liouvillian build_liouvillian(const SystemParams& params, const std::optional<DriveParams>& drive,
                              OracleDims dims) {
    dims.validate();
    params.validate();
    if (drive) drive->validate(params);
    Basis b(dims);
    const NvRates& r = params.rates;
    const ResonatorParams& res = params.resonator;
    const double nth = params.thermal_photons();

    double det_mode = drive ? drive->detuning_mode : 0.0;
    double det_spin = drive ? drive->detuning_spin : res.omega31 - res.omega_m;
    double eps = drive ? drive->rate(res.kappa) : 0.0;

    SpMat a = annihilation(b);
    SpMat ad = SpMat(a.adjoint());
    SpMat H = det_mode * (ad * a);
    if (eps != 0.0) H += eps * (a + ad);

    struct Jump {
        SpMat op;
        double rate;
    };
    std::vector<Jump> jumps;
    for (int k = 0; k < dims.n_spins; ++k) {
        H += det_spin * spin_op(b, k, 3, 3);
        SpMat s13 = spin_op(b, k, 1, 3);
        H += res.g31 * (ad * s13 + SpMat(s13.adjoint()) * a);
        auto add = [&](int from, int to, double rate) {
            if (rate > 0.0) jumps.push_back({spin_op(b, k, to, from), rate});
        };
        add(1, 4, r.xi);
        add(2, 5, r.xi);
        add(3, 6, r.xi);
        add(4, 1, r.xi + r.k_sp);
        add(5, 2, r.xi + r.k_sp);
        add(6, 3, r.xi + r.k_sp);
        add(4, 7, r.k47);
        add(5, 7, r.k57);
        add(6, 7, r.k67);
        add(7, 1, r.k71);
        add(7, 2, r.k72);
        add(7, 3, r.k73);
        add(1, 2, r.k12);
        add(2, 1, r.k21);
        add(1, 3, r.k13);
        add(3, 1, r.k31);
        if (r.chi2 > 0.0) jumps.push_back({spin_op(b, k, 2, 2), 2.0 * r.chi2});
        if (r.chi3 > 0.0) jumps.push_back({spin_op(b, k, 3, 3), 2.0 * r.chi3});
    }
    if (res.kappa > 0.0) {
        jumps.push_back({a, res.kappa * (nth + 1.0)});
        if (nth > 0.0) jumps.push_back({ad, res.kappa * nth});
    }

    const SpMat I = identity(b.D);
    const cplx im(0.0, 1.0);
    SpMat Ht = SpMat(H.transpose());
    SpMat L = SpMat(Eigen::kroneckerProduct(I, H)) * (-im) + SpMat(Eigen::kroneckerProduct(Ht, I)) * im;
    for (const Jump& j : jumps) {
        SpMat ldl = SpMat(j.op.adjoint()) * j.op;
        SpMat conj_op = j.op.conjugate();
        SpMat ldlt = SpMat(ldl.transpose());
        L += j.rate * (SpMat(Eigen::kroneckerProduct(conj_op, j.op)) -
                       0.5 * SpMat(Eigen::kroneckerProduct(I, ldl)) -
                       0.5 * SpMat(Eigen::kroneckerProduct(ldlt, I)));
    }
    L.prune(cplx(0.0));
    L.makeCompressed();
    return {dims, std::move(L)};
}

DensityState DensityState::product(OracleDims dims, const std::array<double, 7>& pops, double nbar) {
    dims.validate();
    if (!(nbar >= 0.0)) throw DomainError("mean photon number must be non-negative");
    double ps = 0.0;
    for (double p : pops) {
        if (!(p >= 0.0)) throw DomainError("populations must be non-negative");
        ps += p;
    }
    if (!(ps > 0.0)) throw DomainError("populations must not all vanish");
    Basis b(dims);
    std::vector<double> fock(b.F);
    double fs = 0.0;
    for (int n = 0; n < b.F; ++n) {
        fock[n] = std::pow(nbar / (nbar + 1.0), n) / (nbar + 1.0);
        fs += fock[n];
    }
    DensityState s{dims, Eigen::MatrixXcd::Zero(b.D, b.D)};
    for (int idx = 0; idx < b.D; ++idx) {
        double w = fock[b.fock(idx)] / fs;
        for (int k = 0; k < dims.n_spins; ++k) w *= pops[b.spin_level(idx, k)] / ps;
        s.rho(idx, idx) = w;
    }
    return s;
}

double DensityState::trace_error() const { return std::abs(rho.trace() - cplx(1.0)); }

double DensityState::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DensityState::min_eigenvalue() const {
    Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityState::validate(double tol) const {
    if (trace_error() > tol) throw DomainError("density matrix trace differs from one");
    if (hermiticity_error() > tol) throw DomainError("density matrix is not Hermitian");
    if (min_eigenvalue() < -tol) throw DomainError("density matrix is not positive semidefinite");
}

OracleMoments oracle_moments(const DensityState& state) {
    Basis b(state.dims);
    const Eigen::MatrixXcd& rho = state.rho;
    OracleMoments m;
    for (int idx = 0; idx < b.D; ++idx) {
        double d = rho(idx, idx).real();
        m.pop[b.spin_level(idx, 0)] += d;
        m.photon_n += b.fock(idx) * d;
        if (b.fock(idx) == b.F - 1) m.cutoff_population += d;
    }
    SpMat a = annihilation(b);
    SpMat s13 = spin_op(b, 0, 1, 3);
    m.a_mean = expectation(a, rho);
    m.sigma13_mean = expectation(s13, rho);
    m.spin_photon = expectation(SpMat(SpMat(a.adjoint()) * s13), rho);
    if (state.dims.n_spins == 2) m.spin_spin = expectation(SpMat(spin_op(b, 0, 3, 1) * spin_op(b, 1, 1, 3)), rho);
    return m;
}

OracleSeries evolve(const DensityState& state, const Liouvillian& generator, const std::vector<double>& times,
                    double tol) {
    const int D = state.dims.hilbert_dim();
    if (state.dims.n_spins != generator.dims.n_spins || state.dims.fock_cutoff != generator.dims.fock_cutoff)
        throw DomainError("density state and generator dimensions differ");
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw DomainError("sample times must be non-negative and ascending");
    const SpMat& L = generator.matrix;
    const long full = long(D) * D;

    // Closed subspace reachable from the initial support.
    Eigen::Map<const Eigen::VectorXcd> v0(state.rho.data(), full);
    std::vector<long> local(full, -1);
    std::vector<long> members;
    std::deque<long> queue;
    for (long i = 0; i < full; ++i)
        if (v0[i] != cplx(0.0)) {
            local[i] = long(members.size());
            members.push_back(i);
            queue.push_back(i);
        }
    while (!queue.empty()) {
        long c = queue.front();
        queue.pop_front();
        for (SpMat::InnerIterator it(L, c); it; ++it) {
            long rrow = it.row();
            if (local[rrow] < 0) {
                local[rrow] = long(members.size());
                members.push_back(rrow);
                queue.push_back(rrow);
            }
        }
    }
    const long m = long(members.size());
    std::vector<Trip> trips;
    for (long j = 0; j < m; ++j)
        for (SpMat::InnerIterator it(L, members[j]); it; ++it) trips.emplace_back(local[it.row()], j, it.value());
    SpMat Ls(m, m);
    Ls.setFromTriplets(trips.begin(), trips.end());
    Ls.makeCompressed();

    Vec<cplx> y(m);
    for (long j = 0; j < m; ++j) y[j] = v0[members[j]];

    OracleSeries out;
    out.subspace_dim = m;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    auto record = [&](double t, const Vec<cplx>& v) {
        DensityState s{state.dims, Eigen::MatrixXcd::Zero(D, D)};
        for (long j = 0; j < m; ++j) s.rho.data()[members[j]] = v[j];
        OracleMoments mo = oracle_moments(s);
        mo.t = t;
        out.max_trace_error = std::max(out.max_trace_error, s.trace_error());
        out.max_hermiticity_error = std::max(out.max_hermiticity_error, s.hermiticity_error());
        out.min_eigenvalue = std::min(out.min_eigenvalue, s.min_eigenvalue());
        out.samples.push_back(mo);
    };

    auto sys = [&](const Vec<cplx>& x, Vec<cplx>& dx) { dx = Ls * x; };
    SparseConstSolver<cplx> lin(Ls);
    RodasOptions opt;
    opt.rtol = tol;
    Eigen::VectorXd atol = Eigen::VectorXd::Constant(m, tol * 1e-2);

    std::size_t next = 0;
    double t = 0.0;
    while (next < times.size() && times[next] <= 0.0) record(times[next++], y);
    if (next < times.size()) {
        out.stats = rodas_integrate<cplx>(sys, lin, y, t, times.back(), atol, opt, [&](const DenseStep<cplx>& ds) {
            while (next < times.size() && times[next] <= ds.t1()) {
                double ts = times[next++];
                record(ts, ts >= ds.t1() ? *ds.y1 : ds(ts));
            }
        });
        while (next < times.size()) record(times[next++], y);
    }

    if (out.max_trace_error > 1e-6 || out.max_hermiticity_error > 1e-6 || out.min_eigenvalue < -1e-6) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "oracle state lost physicality (trace %.3g, hermiticity %.3g, min eig %.3g)",
                      out.max_trace_error, out.max_hermiticity_error, out.min_eigenvalue);
        throw IntegrationError(buf, times.empty() ? 0.0 : times.back());
    }
    double worst_cut = 0.0;
    for (const OracleMoments& s : out.samples) worst_cut = std::max(worst_cut, s.cutoff_population);
    if (worst_cut > 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Fock cutoff %d holds population %.3g; raise the cutoff",
                      state.dims.fock_cutoff, worst_cut);
        out.warnings.emplace_back(buf);
    }
    return out;
}

}  // namespace nvcool
