#pragma once
//
// Proper-time Dirac operator identities with gamma matrices in the Dirac
// representation and the momentum treated as a commuting numeric 4-tuple.
//
//   H      = p_mu gamma^mu - m
//   S^{mn} = i (gamma^m gamma^n - gamma^n gamma^m) / 4
//   Gdot   = -i [H, G]          (orientation, see kHeisenbergOrientation)
//

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

#include "zitterkit/error.hpp"
#include "zitterkit/minkowski.hpp"

namespace zitterkit {

using MatrixC4 = Eigen::Matrix4cd;

/*!
 * Sign s in Gdot = s i [H, G].
 *
 * With p^mu = i d^mu and S = (i/4)[gamma, gamma], s = -1 gives
 * -i[H, x^mu] = gamma^mu, -i[H, S] = p gamma - gamma p and
 * -i[H, gamma^mu] = 4 S^{mu nu} p_nu, matching the classical bracket
 * orientation. The literal s = +1 flips the sign of the last two; that
 * factor is measured and reported by verify_heisenberg().
 */
inline constexpr double kHeisenbergOrientation = -1.0;

inline const std::array<MatrixC4, 4>& gamma_matrices() {
    static const std::array<MatrixC4, 4> g = [] {
        using C = std::complex<double>;
        const C i{0, 1};
        std::array<MatrixC4, 4> r;
        r[0] << 1, 0, 0, 0,
                0, 1, 0, 0,
                0, 0, -1, 0,
                0, 0, 0, -1;
        // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
        r[1] << 0, 0, 0, 1,
                0, 0, 1, 0,
                0, -1, 0, 0,
                -1, 0, 0, 0;
        r[2] << 0, 0, 0, -i,
                0, 0, i, 0,
                0, i, 0, 0,
                -i, 0, 0, 0;
        r[3] << 0, 0, 1, 0,
                0, 0, 0, -1,
                -1, 0, 0, 0,
                0, 1, 0, 0;
        return r;
    }();
    return g;
}

inline MatrixC4 spin_operator(std::size_t mu, std::size_t nu) {
    const auto& g = gamma_matrices();
    return std::complex<double>(0, 0.25) * (g[mu] * g[nu] - g[nu] * g[mu]);
}

/// p_mu gamma^mu
inline MatrixC4 slash(const FourVector& p) {
    const auto& g = gamma_matrices();
    const auto pl = p.lower();
    MatrixC4 r = MatrixC4::Zero();
    for (std::size_t mu = 0; mu < 4; ++mu) r += pl[mu] * g[mu];
    return r;
}

inline MatrixC4 dirac_hamiltonian(const FourVector& p, double m) { return slash(p) - m * MatrixC4::Identity(); }

inline MatrixC4 commutator(const MatrixC4& a, const MatrixC4& b) { return a * b - b * a; }

/// Oriented Heisenberg derivative s i [H, G].
inline MatrixC4 heisenberg_derivative(const MatrixC4& h, const MatrixC4& g) {
    return std::complex<double>(0, kHeisenbergOrientation) * commutator(h, g);
}

/// Max Frobenius residual of gamma^mu gamma^nu + gamma^nu gamma^mu = 2 g^{mu nu} over all pairs.
inline double clifford_residual() {
    const auto& g = gamma_matrices();
    double r = 0;
    for (std::size_t mu = 0; mu < 4; ++mu)
        for (std::size_t nu = mu; nu < 4; ++nu) {
            const double eta = (mu == nu) ? 2.0 * metric(mu) : 0.0;
            r = std::max(r, (g[mu] * g[nu] + g[nu] * g[mu] - eta * MatrixC4::Identity()).norm());
        }
    return r;
}

//---------------------------------------------------------------------------//
// Heisenberg identities
//---------------------------------------------------------------------------//

struct HeisenbergReport {
    double momentum = 0;      ///< (a) ||-i[H, p^mu]||
    double spin = 0;          ///< (b) ||-i[H, S^{mn}] - (p^m gamma^n - p^n gamma^m)||
    double acceleration = 0;  ///< (c) ||-i[H, gamma^mu] - 4 S^{mu nu} p_nu||
    double jerk = 0;          ///< (d) ||-i[H, a^mu] + 4 p^2 gamma^mu - 4 p^mu pslash||
    /// Best-fit lambda in  i[H, .] = lambda * RHS  for (b), (c), (d) with the
    /// literal (+i) orientation; NaN when every right-hand side vanishes.
    double literal_factor_spin = 0;
    double literal_factor_acceleration = 0;
    double literal_factor_jerk = 0;

    double max() const noexcept { return std::max({momentum, spin, acceleration, jerk}); }
};

namespace detail {
struct FactorFit {
    std::complex<double> num{0, 0};
    double den = 0;
    void add(const MatrixC4& lhs, const MatrixC4& rhs) {
        num += (rhs.adjoint() * lhs).trace();
        den += rhs.squaredNorm();
    }
    double value() const {
        return den > 0 ? num.real() / den : std::numeric_limits<double>::quiet_NaN();
    }
};
}  // namespace detail

/*!
 * Check the operator identities (a)-(d) for momentum p and mass m. They
 * are algebraic and hold on and off shell.
 */
inline HeisenbergReport verify_heisenberg(const FourVector& p, double m) {
    const auto& g = gamma_matrices();
    const MatrixC4 h = dirac_hamiltonian(p, m);
    const MatrixC4 ps = slash(p);
    const MatrixC4 id = MatrixC4::Identity();
    const double p2 = dot(p, p);
    const auto pl = p.lower();
    const std::complex<double> i_literal{0, 1};

    HeisenbergReport r;
    detail::FactorFit fit_b, fit_c, fit_d;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        r.momentum = std::max(r.momentum, heisenberg_derivative(h, p[mu] * id).norm());

        for (std::size_t nu = mu + 1; nu < 4; ++nu) {
            const MatrixC4 s = spin_operator(mu, nu);
            const MatrixC4 rhs = p[mu] * g[nu] - p[nu] * g[mu];
            r.spin = std::max(r.spin, (heisenberg_derivative(h, s) - rhs).norm());
            fit_b.add(i_literal * commutator(h, s), rhs);
        }

        MatrixC4 four_sp = MatrixC4::Zero();
        for (std::size_t nu = 0; nu < 4; ++nu) four_sp += 4.0 * pl[nu] * spin_operator(mu, nu);
        const MatrixC4 accel = heisenberg_derivative(h, g[mu]);
        r.acceleration = std::max(r.acceleration, (accel - four_sp).norm());
        fit_c.add(i_literal * commutator(h, g[mu]), four_sp);

        const MatrixC4 rhs_d = -4.0 * p2 * g[mu] + 4.0 * p[mu] * ps;
        r.jerk = std::max(r.jerk, (heisenberg_derivative(h, accel) - rhs_d).norm());
        const MatrixC4 accel_literal = i_literal * commutator(h, g[mu]);
        fit_d.add(i_literal * commutator(h, accel_literal), rhs_d);
    }
    r.literal_factor_spin = fit_b.value();
    r.literal_factor_acceleration = fit_c.value();
    r.literal_factor_jerk = fit_d.value();
    return r;
}

//---------------------------------------------------------------------------//
// On-shell operator Zitterbewegung equation
//---------------------------------------------------------------------------//

/// Projector (pslash + m) / 2m onto the pslash = m eigenspace.
inline MatrixC4 onshell_projector(const FourVector& p, double m) {
    return (slash(p) + m * MatrixC4::Identity()) / (2.0 * m);
}

struct OnShellReport {
    int eigenspace_dimension = 0;
    double projector_mismatch = 0;  ///< closed-form vs eigen-decomposition projector
    double jerk_reduction = 0;      ///< ||P (adot^mu - (-4 m^2 gamma^mu + 4 m p^mu)) P||
    double zbw_identity = 0;        ///< ||P (gamma^mu - p^mu/m + adot^mu / 4m^2) P||

    double max() const noexcept { return std::max({projector_mismatch, jerk_reduction, zbw_identity}); }
};

/*!
 * Restrict the operator equations to the on-shell subspace pslash psi = m psi
 * (where also p^2 = m^2) and check
 *   adot^mu = -4 m^2 gamma^mu + 4 m p^mu,   v^mu = gamma^mu = p^mu/m - adot^mu/(4 m^2).
 */
inline OnShellReport verify_onshell_zbw(const FourVector& p, double m) {
    if (!(m > 0)) throw InvalidParameter("mass must be positive");
    if (std::abs(dot(p, p) - m * m) > 1e-10) throw PreconditionError("momentum is off shell");

    const auto& g = gamma_matrices();
    const MatrixC4 id = MatrixC4::Identity();
    const MatrixC4 h = dirac_hamiltonian(p, m);
    const MatrixC4 proj = onshell_projector(p, m);

    Eigen::ComplexEigenSolver<MatrixC4> solver(slash(p));
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    Eigen::Vector4cd select = Eigen::Vector4cd::Zero();
    OnShellReport r;
    for (Eigen::Index k = 0; k < 4; ++k)
        if (std::abs(values[k] - m) <= 1e-8 * std::max(1.0, m)) {
            select[k] = 1.0;
            ++r.eigenspace_dimension;
        }
    if (r.eigenspace_dimension != 2) throw DegeneracyError("eigenvalue-m eigenspace of pslash is not two-dimensional");
    const MatrixC4 proj_eig = vectors * select.asDiagonal() * vectors.inverse();
    r.projector_mismatch = (proj_eig - proj).norm();

    for (std::size_t mu = 0; mu < 4; ++mu) {
        const MatrixC4 accel = heisenberg_derivative(h, g[mu]);
        const MatrixC4 jerk = heisenberg_derivative(h, accel);
        const MatrixC4 reduced = -4.0 * m * m * g[mu] + 4.0 * m * p[mu] * id;
        r.jerk_reduction = std::max(r.jerk_reduction, (proj * (jerk - reduced) * proj).norm());
        const MatrixC4 zbw = g[mu] - (p[mu] / m) * id + jerk / (4.0 * m * m);
        r.zbw_identity = std::max(r.zbw_identity, (proj * zbw * proj).norm());
    }
    return r;
}

}  // namespace zitterkit
