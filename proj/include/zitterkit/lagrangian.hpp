#pragma once
//
// Order-n higher-derivative Lagrangian
//
//     L_n = sum_{i=0..n} 1/2 k_i (v^(i))^2 - U,    k_0 = m,
//
// its canonical momenta, the generalized Newton law and, for n = 1, the
// scalar Hamiltonian on the (x, p; q, pi) phase space.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zitterkit/error.hpp"
#include "zitterkit/minkowski.hpp"

namespace zitterkit {

//---------------------------------------------------------------------------//
// ModelParams
//---------------------------------------------------------------------------//
/*!
 * Mass, unit constants and Lagrangian coefficients k_0..k_n.
 *
 * Construction enforces k_0 = m and the alternating sign pattern
 * (-1)^i k_i > 0. The n = 1 "physical" model fixes k_1 = -hbar^2 / (4 m c^4).
 */
class ModelParams {
public:
    /// n = 1 with k_1 = -hbar^2/(4 m c^4).
    static ModelParams physical(double m, double hbar = 1.0, double c = 1.0) {
        check_units(m, hbar, c);
        return ModelParams(m, hbar, c, {m, -hbar * hbar / (4.0 * m * std::pow(c, 4))});
    }

    /// n = 0, the spinless Newtonian Lagrangian 1/2 m v^2.
    static ModelParams newtonian(double m, double hbar = 1.0, double c = 1.0) {
        check_units(m, hbar, c);
        return ModelParams(m, hbar, c, {m});
    }

    /// Arbitrary order; k.size() = n + 1.
    static ModelParams with_coefficients(double m, std::vector<double> k, double hbar = 1.0, double c = 1.0) {
        check_units(m, hbar, c);
        return ModelParams(m, hbar, c, std::move(k));
    }

    double mass() const noexcept { return m_; }
    double hbar() const noexcept { return hbar_; }
    double c() const noexcept { return c_; }
    int order() const noexcept { return static_cast<int>(k_.size()) - 1; }
    const std::vector<double>& k() const noexcept { return k_; }
    double k(std::size_t i) const { return k_.at(i); }

    /// First-order coefficient k_1; requires n >= 1.
    double k1() const {
        if (order() < 1) throw UnsupportedOrder("k1 requested for an order-0 (Newtonian) model");
        return k_[1];
    }

    /// hbar^2/(4 m c^4) for the physical model; in general -k_1 (0 when n = 0).
    double zbw_coefficient() const noexcept { return order() >= 1 ? -k_[1] : 0.0; }

    /// Free oscillation frequency of the n = 1 model, sqrt(-m/k_1) = 2 m c^2 / hbar.
    double compton_frequency() const { return std::sqrt(-m_ / k1()); }

private:
    ModelParams(double m, double hbar, double c, std::vector<double> k)
        : m_(m), hbar_(hbar), c_(c), k_(std::move(k)) {
        if (k_.empty()) throw InvalidParameter("coefficient list must contain at least k0");
        if (std::abs(k_[0] - m_) > 1e-12 * m_) {
            std::ostringstream os;
            os << "k0 must equal the mass (k0=" << k_[0] << ", m=" << m_ << ")";
            throw InvalidParameter(os.str());
        }
        for (std::size_t i = 0; i < k_.size(); ++i) {
            const double signed_k = (i % 2 == 0 ? 1.0 : -1.0) * k_[i];
            if (!std::isfinite(k_[i]) || !(signed_k > 0)) {
                std::ostringstream os;
                os << "coefficient k" << i << "=" << k_[i] << " violates the alternating-sign rule (-1)^i k_i > 0";
                throw InvalidParameter(os.str());
            }
        }
    }

    static void check_units(double m, double hbar, double c) {
        if (!(m > 0) || !std::isfinite(m)) throw InvalidParameter("mass must be positive and finite");
        if (!(hbar > 0) || !std::isfinite(hbar)) throw InvalidParameter("hbar must be positive and finite");
        if (!(c > 0) || !std::isfinite(c)) throw InvalidParameter("c must be positive and finite");
    }

    double m_;
    double hbar_;
    double c_;
    std::vector<double> k_;
};

//---------------------------------------------------------------------------//
// State types
//---------------------------------------------------------------------------//

/// v^(0), v^(1), ... : a 4-vector and its successive proper-time derivatives.
using DerivStack = std::vector<FourVector>;

/// Canonical n = 1 state: (x, p) and the second pair (q = v, pi = k_1 a).
struct PhasePoint {
    FourVector x, p, q, pi;
    double tau = 0;

    static constexpr std::size_t dimension = 16;

    /// Coordinates in the order x0..x3, p0..p3, q0..q3, pi0..pi3.
    std::array<double, dimension> coordinates() const noexcept {
        std::array<double, dimension> r{};
        for (std::size_t mu = 0; mu < 4; ++mu) {
            r[mu] = x[mu];
            r[4 + mu] = p[mu];
            r[8 + mu] = q[mu];
            r[12 + mu] = pi[mu];
        }
        return r;
    }

    static PhasePoint from_coordinates(const std::array<double, dimension>& r, double tau = 0) noexcept {
        PhasePoint s;
        for (std::size_t mu = 0; mu < 4; ++mu) {
            s.x[mu] = r[mu];
            s.p[mu] = r[4 + mu];
            s.q[mu] = r[8 + mu];
            s.pi[mu] = r[12 + mu];
        }
        s.tau = tau;
        return s;
    }
};

//---------------------------------------------------------------------------//
// ScalarPotential
//---------------------------------------------------------------------------//
/*!
 * External scalar potential U(x) on spacetime.
 *
 * gradient() returns the covariant-derivative components dU/dx_mu
 * (= g^{mu mu} dU/dx^mu), the quantity entering pdot^mu = -dU/dx_mu. When no
 * analytic gradient is supplied a central difference with step
 * 1e-6 (1 + |x|) is used.
 */
class ScalarPotential {
public:
    using ValueFn = std::function<double(const FourVector&)>;
    using GradFn = std::function<FourVector(const FourVector&)>;

    ScalarPotential() : ScalarPotential([](const FourVector&) { return 0.0; }, [](const FourVector&) { return FourVector{}; }) {}
    explicit ScalarPotential(ValueFn value, GradFn gradient = {})
        : value_(std::move(value)), gradient_(std::move(gradient)) {}

    static ScalarPotential zero() { return ScalarPotential(); }

    /// U = 1/2 k |x_vec|^2 (spatial components only).
    static ScalarPotential spatial_harmonic(double k) {
        return ScalarPotential([k](const FourVector& x) { return 0.5 * k * dot(x.space(), x.space()); },
                               [k](const FourVector& x) { return FourVector(0.0, -k * x[1], -k * x[2], -k * x[3]); });
    }

    double operator()(const FourVector& x) const { return value_(x); }
    bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }

    FourVector gradient(const FourVector& x) const {
        if (gradient_) return gradient_(x);
        return numeric_gradient(x);
    }

    FourVector numeric_gradient(const FourVector& x) const {
        const double h = 1e-6 * (1.0 + std::sqrt(x[0] * x[0] + dot(x.space(), x.space())));
        FourVector g;
        for (std::size_t mu = 0; mu < 4; ++mu) {
            FourVector xp = x, xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            g[mu] = metric(mu) * (value_(xp) - value_(xm)) / (2.0 * h);
        }
        return g;
    }

private:
    ValueFn value_;
    GradFn gradient_;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//
namespace detail {
inline void require_stack(std::span<const FourVector> d, std::size_t needed, const char* what) {
    if (d.size() < needed) {
        std::ostringstream os;
        os << what << ": derivative stack has " << d.size() << " entries, " << needed << " required";
        throw ArityError(os.str());
    }
}
}  // namespace detail

/// sum_i 1/2 k_i (v^(i) . v^(i)) - U
inline double lagrangian_value(const ModelParams& params, std::span<const FourVector> d, double potential) {
    const auto n = static_cast<std::size_t>(params.order());
    detail::require_stack(d, n + 1, "lagrangian_value");
    double l = 0;
    for (std::size_t i = 0; i <= n; ++i) l += 0.5 * params.k(i) * dot(d[i], d[i]);
    return l - potential;
}

/// p^mu = sum_i (-1)^i k_i v^(2i)mu; needs v^(0)..v^(2n).
inline FourVector canonical_momentum(const ModelParams& params, std::span<const FourVector> d) {
    const auto n = static_cast<std::size_t>(params.order());
    detail::require_stack(d, 2 * n + 1, "canonical_momentum");
    FourVector p;
    for (std::size_t i = 0; i <= n; ++i) p += ((i % 2 == 0) ? 1.0 : -1.0) * params.k(i) * d[2 * i];
    return p;
}

/// pi^mu = k_1 a^mu, the momentum conjugate to q = v.
inline FourVector pi_momentum(const ModelParams& params, const FourVector& a) {
    if (params.order() < 1) throw UnsupportedOrder("pi momentum needs a Lagrangian of order n >= 1");
    return params.k1() * a;
}

/*!
 * n = 1 scalar Hamiltonian H = p.q - m q^2/2 + pi^2/(2 k_1) + U.
 *
 * With the physical k_1 the pi term is -(2 m c^4/hbar^2) pi^2.
 */
inline double hamiltonian(const ModelParams& params, const PhasePoint& s, double potential) {
    if (params.order() != 1) throw UnsupportedOrder("the Hamiltonian is implemented for n = 1 only");
    return dot(s.p, s.q) - 0.5 * params.mass() * dot(s.q, s.q) + dot(s.pi, s.pi) / (2.0 * params.k1()) + potential;
}

/*!
 * Residual of the generalized Newton law sum_i (-1)^i k_i a^(2i) - F.
 *
 * \param accel acceleration stack a, adot, addot, ... (at least 2n+1 entries)
 */
inline FourVector newton_law_residual(const ModelParams& params, std::span<const FourVector> accel, const FourVector& force) {
    const auto n = static_cast<std::size_t>(params.order());
    detail::require_stack(accel, 2 * n + 1, "newton_law_residual");
    FourVector r = -force;
    for (std::size_t i = 0; i <= n; ++i) r += ((i % 2 == 0) ? 1.0 : -1.0) * params.k(i) * accel[2 * i];
    return r;
}

/*!
 * Positive real frequencies w solving sum_i k_i w^(2i) = 0, ascending.
 *
 * The polynomial in z = w^2 is solved through the eigenvalues of its
 * companion matrix; eigenvalues with |Im z| <= 1e-10 |z| and Re z > 0 count
 * as real and are refined by one Newton step on the polynomial.
 */
inline std::vector<double> characteristic_frequencies(const ModelParams& params) {
    const int n = params.order();
    std::vector<double> result;
    if (n == 0) return result;

    const auto& k = params.k();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -k[static_cast<std::size_t>(i)] / k[static_cast<std::size_t>(n)];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& z = solver.eigenvalues();

    auto poly = [&k](double x) {
        double value = 0, deriv = 0;
        for (std::size_t i = k.size(); i-- > 0;) {
            deriv = deriv * x + value;
            value = value * x + k[i];
        }
        return std::pair{value, deriv};
    };

    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double re = z[i].real();
        if (!(re > 0) || std::abs(z[i].imag()) > 1e-10 * std::abs(z[i])) continue;
        double root = re;
        const auto [value, deriv] = poly(root);
        if (deriv != 0) {
            const double polished = root - value / deriv;
            if (polished > 0 && std::abs(poly(polished).first) <= std::abs(value)) root = polished;
        }
        result.push_back(std::sqrt(root));
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace zitterkit
