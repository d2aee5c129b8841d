#pragma once
//
// Numerical Poisson brackets on the 16-dimensional phase space (x, p; q, pi)
// of the n = 1 theory.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>

#include "zitterkit/lagrangian.hpp"
#include "zitterkit/minkowski.hpp"

namespace zitterkit {

/// A real function on phase space.
struct PhaseFunction {
    std::string label;
    std::function<double(const PhasePoint&)> eval;

    double operator()(const PhasePoint& s) const { return eval(s); }
};

/*!
 * Global orientation applied to the bracket.
 *
 * Expanding the bracket
 *   (df/dx_mu dg/dp^mu - df/dp_mu dg/dx^mu) + (df/dq_mu dg/dpi^mu - df/dpi_mu dg/dq^mu)
 * literally under (+,-,-,-) gives {H, x^mu} = -q^mu. Multiplying by -1 makes
 * Gdot = {H, G} reproduce the Hamilton equations (xdot = dH/dp), so every
 * bracket returned by poisson() carries this factor.
 */
inline constexpr double kBracketOrientation = -1.0;

using PhaseGradient = std::array<double, PhasePoint::dimension>;

/// Central-difference partials df/dz^a with step h (1 + |z^a|), z = (x, p, q, pi) contravariant.
inline PhaseGradient phase_gradient(const PhaseFunction& f, const PhasePoint& s, double h = 1e-4) {
    const auto z = s.coordinates();
    PhaseGradient g{};
    for (std::size_t a = 0; a < PhasePoint::dimension; ++a) {
        const double step = h * (1.0 + std::abs(z[a]));
        auto zp = z, zm = z;
        zp[a] += step;
        zm[a] -= step;
        g[a] = (f(PhasePoint::from_coordinates(zp, s.tau)) - f(PhasePoint::from_coordinates(zm, s.tau))) / (2.0 * step);
    }
    return g;
}

/// Literal bracket from precomputed partials; lower-index derivatives carry g^{mu mu}.
inline double bracket_literal(const PhaseGradient& df, const PhaseGradient& dg) noexcept {
    double r = 0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double pair_xp = df[mu] * dg[4 + mu] - df[4 + mu] * dg[mu];
        const double pair_qpi = df[8 + mu] * dg[12 + mu] - df[12 + mu] * dg[8 + mu];
        r += metric(mu) * (pair_xp + pair_qpi);
    }
    return r;
}

inline double bracket(const PhaseGradient& df, const PhaseGradient& dg) noexcept {
    return kBracketOrientation * bracket_literal(df, dg);
}

/// {f, g} at s, oriented so that Gdot = {H, G}.
inline double poisson(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& s, double h = 1e-4) {
    return bracket(phase_gradient(f, s, h), phase_gradient(g, s, h));
}

//---------------------------------------------------------------------------//
// Standard phase functions
//---------------------------------------------------------------------------//
namespace phase {

inline PhaseFunction x(std::size_t mu) {
    return {"x" + std::to_string(mu), [mu](const PhasePoint& s) { return s.x[mu]; }};
}
inline PhaseFunction p(std::size_t mu) {
    return {"p" + std::to_string(mu), [mu](const PhasePoint& s) { return s.p[mu]; }};
}
inline PhaseFunction q(std::size_t mu) {
    return {"q" + std::to_string(mu), [mu](const PhasePoint& s) { return s.q[mu]; }};
}
inline PhaseFunction pi(std::size_t mu) {
    return {"pi" + std::to_string(mu), [mu](const PhasePoint& s) { return s.pi[mu]; }};
}

/// Canonical spin tensor component S^{mu nu} = q^mu pi^nu - q^nu pi^mu.
inline PhaseFunction spin(std::size_t mu, std::size_t nu) {
    return {"S" + std::to_string(mu) + std::to_string(nu),
            [mu, nu](const PhasePoint& s) { return s.q[mu] * s.pi[nu] - s.q[nu] * s.pi[mu]; }};
}

inline PhaseFunction hamiltonian(const ModelParams& params, ScalarPotential potential = ScalarPotential::zero()) {
    return {"H", [params, potential = std::move(potential)](const PhasePoint& s) {
                return zitterkit::hamiltonian(params, s, potential(s.x));
            }};
}

}  // namespace phase

//---------------------------------------------------------------------------//
// Hamilton-equation and spin-evolution brackets
//---------------------------------------------------------------------------//

/// Max residuals of the free bracket evolution equations at one point.
struct AppendixResiduals {
    double momentum = 0;  ///< |{H, p}|
    double position = 0;  ///< |{H, x} - q|
    double velocity = 0;  ///< |{H, q} - pi/k1|       (= {H,q} + 4mc^4/hbar^2 pi)
    double pi = 0;        ///< |{H, pi} + (p - m q)|
    double spin = 0;      ///< |{H, S} - (p q - q p)|

    double max() const noexcept { return std::max({momentum, position, velocity, pi, spin}); }

    void absorb(const AppendixResiduals& o) noexcept {
        momentum = std::max(momentum, o.momentum);
        position = std::max(position, o.position);
        velocity = std::max(velocity, o.velocity);
        pi = std::max(pi, o.pi);
        spin = std::max(spin, o.spin);
    }
};

/*!
 * Evaluate the free (U = 0) evolution brackets of x, p, q, pi and of the
 * canonical spin tensor against their closed forms at one phase point.
 */
inline AppendixResiduals verify_appendix(const ModelParams& params, const PhasePoint& s, double h = 1e-4) {
    if (params.order() != 1) throw UnsupportedOrder("bracket checks are implemented for n = 1 only");
    const double m = params.mass();
    const double k1 = params.k1();
    const auto dh = phase_gradient(phase::hamiltonian(params), s, h);

    AppendixResiduals r;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        r.momentum = std::max(r.momentum, std::abs(bracket(dh, phase_gradient(phase::p(mu), s, h))));
        r.position = std::max(r.position, std::abs(bracket(dh, phase_gradient(phase::x(mu), s, h)) - s.q[mu]));
        r.velocity = std::max(r.velocity, std::abs(bracket(dh, phase_gradient(phase::q(mu), s, h)) - s.pi[mu] / k1));
        r.pi = std::max(r.pi, std::abs(bracket(dh, phase_gradient(phase::pi(mu), s, h)) + (s.p[mu] - m * s.q[mu])));
        for (std::size_t nu = mu + 1; nu < 4; ++nu) {
            const double expected = s.p[mu] * s.q[nu] - s.p[nu] * s.q[mu];
            r.spin = std::max(r.spin, std::abs(bracket(dh, phase_gradient(phase::spin(mu, nu), s, h)) - expected));
        }
    }
    return r;
}

}  // namespace zitterkit
