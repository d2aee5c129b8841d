#pragma once
//
// Time evolution of the n = 1 theory and of free order-n motion.
//
//   * FreeSolution / eval_free: the closed-form Compton-frequency solution
//         v = p/m + E cos(w tau) + H sin(w tau)
//   * integrate_hamilton: RK4 on the Hamilton equations in (x, p; q, pi)
//   * integrate_free_general_n: RK4 on the order-2n linear velocity equation
//   * monitor: conservation laws and identities along a sampled trajectory
//

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "zitterkit/error.hpp"
#include "zitterkit/lagrangian.hpp"
#include "zitterkit/minkowski.hpp"
#include "zitterkit/rk4.hpp"

namespace zitterkit {

//---------------------------------------------------------------------------//
// Closed-form free motion
//---------------------------------------------------------------------------//

/// Validated initial data of the free n = 1 solution.
struct FreeSolution {
    ModelParams params;
    FourVector p, E, H, x0;
    double omega;
};

/// Tolerance used for every constraint check on free-solution data.
inline constexpr double kConstraintTolerance = 1e-10;

/*!
 * Validate (p, E, H) and build a FreeSolution.
 *
 * Requires p^2 = m^2, E and H spacelike (or zero) and p.E = p.H = 0. With
 * \c project set, E and H are first replaced by their components orthogonal
 * to p, and the result is validated again.
 */
inline FreeSolution make_free_solution(const ModelParams& params, const FourVector& p, FourVector E, FourVector H,
                                       const FourVector& x0 = {}, bool project = false) {
    if (params.order() != 1) throw UnsupportedOrder("the closed-form free solution exists for n = 1 only");
    const double m = params.mass();
    const double tol = kConstraintTolerance;

    const double pp = dot(p, p);
    if (std::abs(pp - m * m) > tol) {
        std::ostringstream os;
        os << "momentum is off shell: p.p=" << pp << " but m^2=" << m * m;
        throw ConstraintViolation(os.str());
    }
    if (project) {
        E -= (dot(p, E) / pp) * p;
        H -= (dot(p, H) / pp) * p;
    }
    auto check_spacelike = [tol](const FourVector& u, const char* name) {
        const double uu = dot(u, u);
        if (uu > tol) throw ConstraintViolation(std::string(name) + " is timelike; internal vectors must be spacelike");
        if (uu >= -tol * tol && max_abs(u) > tol)
            throw ConstraintViolation(std::string(name) + " is lightlike; internal vectors must be spacelike or zero");
    };
    check_spacelike(E, "E");
    check_spacelike(H, "H");
    if (std::abs(dot(p, E)) > tol) throw ConstraintViolation("E is not orthogonal to p (p.E != 0)");
    if (std::abs(dot(p, H)) > tol) throw ConstraintViolation("H is not orthogonal to p (p.H != 0)");
    if (!is_finite(x0)) throw InvalidParameter("x0 must be finite");

    return FreeSolution{params, p, E, H, x0, params.compton_frequency()};
}

struct KinematicSample {
    FourVector x, v, a;
};

inline KinematicSample eval_free(const FreeSolution& sol, double tau) {
    const double w = sol.omega;
    const double m = sol.params.mass();
    const double c = std::cos(w * tau);
    const double s = std::sin(w * tau);
    KinematicSample r;
    r.v = sol.p / m + c * sol.E + s * sol.H;
    r.a = w * (-s * sol.E + c * sol.H);
    r.x = sol.x0 + (tau / m) * sol.p + (s / w) * sol.E - ((c - 1.0) / w) * sol.H;
    return r;
}

/// Canonical state of the free solution at tau: q = v, pi = k_1 a.
inline PhasePoint phase_point_at(const FreeSolution& sol, double tau) {
    const auto k = eval_free(sol, tau);
    return PhasePoint{k.x, sol.p, k.v, pi_momentum(sol.params, k.a), tau};
}

//---------------------------------------------------------------------------//
// Trajectories
//---------------------------------------------------------------------------//

struct IntegratorSettings {
    double dt = 1e-3;
    double tau_end = 1.0;
    int stride = 1;  ///< record every stride-th step
};

/// Sampled n = 1 trajectory with the Hamiltonian recorded per sample.
struct HamiltonTrajectory {
    std::vector<double> tau;
    std::vector<PhasePoint> states;
    std::vector<double> hamiltonian;
};

/// Sampled free order-n trajectory: x and v^(0)..v^(2n-1) per sample.
struct GeneralTrajectory {
    std::vector<double> tau;
    std::vector<FourVector> x;
    std::vector<DerivStack> stacks;
    FourVector p;
};

namespace detail {
inline long step_count(const IntegratorSettings& s) {
    if (!(s.dt > 0) || !std::isfinite(s.dt)) throw InvalidParameter("dt must be positive");
    if (!(s.tau_end > 0) || !std::isfinite(s.tau_end)) throw InvalidParameter("end time must be positive");
    if (s.stride < 1) throw InvalidParameter("stride must be >= 1");
    return std::max(1L, std::lround(s.tau_end / s.dt));
}
}  // namespace detail

/*!
 * RK4 integration of the n = 1 Hamilton equations
 *
 *     xdot = q,  pdot = -dU/dx_mu,  qdot = pi/k_1,  pidot = m q - p.
 *
 * With the physical k_1, qdot = -(4 m c^4/hbar^2) pi. Samples are taken at
 * tau0 + i dt for every stride-th step i.
 */
inline HamiltonTrajectory integrate_hamilton(const PhasePoint& s0, const ModelParams& params, const ScalarPotential& potential,
                                             const IntegratorSettings& settings) {
    if (params.order() != 1) throw UnsupportedOrder("Hamilton integration is implemented for n = 1 only");
    const long steps = detail::step_count(settings);
    const double m = params.mass();
    const double inv_k1 = 1.0 / params.k1();
    const double dt = settings.dt;
    const double tau0 = s0.tau;

    using State = std::array<double, PhasePoint::dimension>;
    auto rhs = [&](double, const State& y) {
        State d{};
        FourVector x(y[0], y[1], y[2], y[3]);
        const FourVector grad = potential.gradient(x);
        for (std::size_t mu = 0; mu < 4; ++mu) {
            d[mu] = y[8 + mu];
            d[4 + mu] = -grad[mu];
            d[8 + mu] = inv_k1 * y[12 + mu];
            d[12 + mu] = m * y[8 + mu] - y[4 + mu];
        }
        return d;
    };

    HamiltonTrajectory traj;
    const auto samples = static_cast<std::size_t>(steps / settings.stride + 1);
    traj.tau.reserve(samples);
    traj.states.reserve(samples);
    traj.hamiltonian.reserve(samples);
    auto record = [&](const State& y, double tau) {
        PhasePoint s = PhasePoint::from_coordinates(y, tau);
        traj.tau.push_back(tau);
        traj.hamiltonian.push_back(hamiltonian(params, s, potential(s.x)));
        traj.states.push_back(s);
    };

    State y = s0.coordinates();
    if (!all_finite(y)) throw InvalidParameter("initial phase point is not finite");
    record(y, tau0);
    for (long i = 1; i <= steps; ++i) {
        const double t = tau0 + static_cast<double>(i - 1) * dt;
        rk4_step(rhs, t, y, dt);
        if (!all_finite(y)) throw IntegrationDiverged("Hamilton integration produced a non-finite state", t);
        if (i % settings.stride == 0) record(y, tau0 + static_cast<double>(i) * dt);
    }
    return traj;
}

/*!
 * Free motion of the order-n theory.
 *
 * \param init v^(0)..v^(2n): the momentum is computed once from this stack
 *             with canonical_momentum and held fixed; v^(2n) then follows from
 *             p = sum_i (-1)^i k_i v^(2i) at every step.
 *
 * n = 0 is uniform motion and is evaluated exactly.
 */
inline GeneralTrajectory integrate_free_general_n(const ModelParams& params, const FourVector& x0, std::span<const FourVector> init,
                                                  const IntegratorSettings& settings) {
    const long steps = detail::step_count(settings);
    const auto n = static_cast<std::size_t>(params.order());
    const FourVector p = canonical_momentum(params, init);
    const std::size_t carried = std::max<std::size_t>(1, 2 * n);  // v^(0)..v^(2n-1)
    const double dt = settings.dt;

    GeneralTrajectory traj;
    traj.p = p;

    if (n == 0) {
        const FourVector v = init[0];
        for (long i = 0; i <= steps; i += settings.stride) {
            const double tau = static_cast<double>(i) * dt;
            traj.tau.push_back(tau);
            traj.x.push_back(x0 + tau * v);
            traj.stacks.push_back(DerivStack{v});
        }
        return traj;
    }

    const double inv_kn = ((n % 2 == 0) ? 1.0 : -1.0) / params.k(n);
    const std::size_t dim = 4 * (carried + 1);

    using State = std::vector<double>;
    auto rhs = [&](double, const State& y) {
        State d(dim);
        // x' = v^(0); v^(i)' = v^(i+1)
        for (std::size_t i = 0; i < 4 * carried; ++i) d[i] = y[i + 4];
        for (std::size_t mu = 0; mu < 4; ++mu) {
            double acc = p[mu];
            for (std::size_t i = 0; i < n; ++i) acc -= ((i % 2 == 0) ? 1.0 : -1.0) * params.k(i) * y[4 * (2 * i + 1) + mu];
            d[4 * carried + mu] = inv_kn * acc;
        }
        return d;
    };

    State y(dim);
    for (std::size_t mu = 0; mu < 4; ++mu) {
        y[mu] = x0[mu];
        for (std::size_t i = 0; i < carried; ++i) y[4 * (i + 1) + mu] = init[i][mu];
    }
    auto record = [&](const State& s, double tau) {
        traj.tau.push_back(tau);
        traj.x.emplace_back(s[0], s[1], s[2], s[3]);
        DerivStack st(carried);
        for (std::size_t i = 0; i < carried; ++i) st[i] = FourVector(s[4 * (i + 1)], s[4 * (i + 1) + 1], s[4 * (i + 1) + 2], s[4 * (i + 1) + 3]);
        traj.stacks.push_back(std::move(st));
    };

    record(y, 0.0);
    for (long i = 1; i <= steps; ++i) {
        const double t = static_cast<double>(i - 1) * dt;
        rk4_step(rhs, t, y, dt);
        if (!all_finite(y)) throw IntegrationDiverged("order-n integration produced a non-finite state", t);
        if (i % settings.stride == 0) record(y, static_cast<double>(i) * dt);
    }
    return traj;
}

//---------------------------------------------------------------------------//
// Monitors
//---------------------------------------------------------------------------//

/// Per-sample diagnostics used for trajectory output.
struct SampleDiagnostics {
    double hamiltonian;
    ThreeVector spin;
    double zbw_residual;    ///< max_mu |v - p/m + Sdot p / m^2| with Sdot from the equations of motion
    double dirac_residual;  ///< p.v - m
};

inline SampleDiagnostics sample_diagnostics(const ModelParams& params, const PhasePoint& s, double potential) {
    const double m = params.mass();
    const double k1 = params.k1();
    const FourVector a = s.pi / k1;
    const FourVector adot = (m * s.q - s.p) / k1;
    const AntisymTensor4 sdot = k1 * AntisymTensor4::wedge(s.q, adot);
    const FourVector res = s.q - s.p / m + contract(sdot, s.p) / (m * m);
    return {hamiltonian(params, s, potential), spin_vector(spin_tensor_from_va(s.q, a, k1)), max_abs(res), dot(s.p, s.q) - m};
}

/*!
 * Maxima over a trajectory of every conservation law and identity of the
 * free n = 1 theory. Entries are non-negative.
 */
struct MonitorReport {
    double momentum_drift = 0;         ///< max |p(tau) - p(0)|
    double hamiltonian_drift = 0;      ///< max |H(tau) - H(0)| / |H(0)|
    double dirac_constraint = 0;       ///< max |p.v - m|
    double mass_shell = 0;             ///< max |p.p - m^2|
    double spin_evolution = 0;         ///< max |Sdot - (p v - v p)|, Sdot by finite differences
    double zbw_equation = 0;           ///< max |v - p/m + Sdot p / m^2|
    double zbw_symmetric = 0;          ///< max |v - p/m + Wtilde_dot / m|
    double spin_momentum_identity = 0; ///< max |S p - (hbar^2/4c^4) a|, i.e. S p - a/4 in natural units
    double spin_vector_drift = 0;      ///< max |s(tau) - s(0)|
    double max_oscillation_square = -std::numeric_limits<double>::infinity();  ///< max (v - p/m)^2 (signed)
};

/*!
 * Monitor a sampled n = 1 trajectory.
 *
 * Sdot and d(Wtilde)/dtau come from 5-point central differences of the
 * sampled S(tau) = k_1 (v a - a v) and Wtilde(tau) = S p / m; the two
 * samples at either end are excluded from the derivative-based maxima.
 * Samples must be uniformly spaced.
 */
inline MonitorReport monitor(const HamiltonTrajectory& traj, const ModelParams& params) {
    const std::size_t count = traj.states.size();
    if (count < 5 || traj.tau.size() != count) throw ArityError("monitor needs at least 5 samples");
    const double h = traj.tau[1] - traj.tau[0];
    for (std::size_t i = 1; i < count; ++i)
        if (std::abs((traj.tau[i] - traj.tau[i - 1]) - h) > 1e-9 * std::abs(h))
            throw InvalidParameter("monitor needs uniformly spaced samples");

    const double m = params.mass();
    const double k1 = params.k1();
    const double identity_scale = -k1 * m;  // hbar^2 / (4 c^4)

    std::vector<AntisymTensor4> spin(count);
    std::vector<FourVector> wt(count);
    MonitorReport r;
    const auto& first = traj.states.front();
    const double h0 = traj.hamiltonian.front();
    const double h_scale = std::abs(h0) > 0 ? std::abs(h0) : 1.0;
    ThreeVector s0;

    for (std::size_t i = 0; i < count; ++i) {
        const auto& s = traj.states[i];
        const FourVector a = s.pi / k1;
        spin[i] = spin_tensor_from_va(s.q, a, k1);
        wt[i] = wtilde(spin[i], s.p, m);
        const ThreeVector sv = spin_vector(spin[i]);
        if (i == 0) s0 = sv;

        r.momentum_drift = std::max(r.momentum_drift, max_abs(s.p - first.p));
        r.hamiltonian_drift = std::max(r.hamiltonian_drift, std::abs(traj.hamiltonian[i] - h0) / h_scale);
        r.dirac_constraint = std::max(r.dirac_constraint, std::abs(dot(s.p, s.q) - m));
        r.mass_shell = std::max(r.mass_shell, std::abs(dot(s.p, s.p) - m * m));
        r.spin_momentum_identity = std::max(r.spin_momentum_identity, max_abs(contract(spin[i], s.p) - identity_scale * a));
        r.spin_vector_drift = std::max(r.spin_vector_drift, max_abs(sv - s0));
        const FourVector osc = s.q - s.p / m;
        r.max_oscillation_square = std::max(r.max_oscillation_square, dot(osc, osc));
    }

    for (std::size_t i = 2; i + 2 < count; ++i) {
        const auto& s = traj.states[i];
        AntisymTensor4 sdot;
        for (std::size_t mu = 0; mu < 4; ++mu)
            for (std::size_t nu = mu + 1; nu < 4; ++nu) {
                const double d = (spin[i - 2](mu, nu) - 8.0 * spin[i - 1](mu, nu) + 8.0 * spin[i + 1](mu, nu) -
                                  spin[i + 2](mu, nu)) / (12.0 * h);
                sdot.set(mu, nu, d);
            }
        FourVector wdot;
        for (std::size_t mu = 0; mu < 4; ++mu)
            wdot[mu] = (wt[i - 2][mu] - 8.0 * wt[i - 1][mu] + 8.0 * wt[i + 1][mu] - wt[i + 2][mu]) / (12.0 * h);

        r.spin_evolution = std::max(r.spin_evolution, max_abs(sdot - AntisymTensor4::wedge(s.p, s.q)));
        r.zbw_equation = std::max(r.zbw_equation, max_abs(s.q - s.p / m + contract(sdot, s.p) / (m * m)));
        r.zbw_symmetric = std::max(r.zbw_symmetric, max_abs(s.q - s.p / m + wdot / m));
    }
    return r;
}

//---------------------------------------------------------------------------//
// Frame-dependent observables
//---------------------------------------------------------------------------//

/*!
 * Angular frequency from the zero crossings of a sampled signal, using
 * linear interpolation between samples: w = pi (N - 1) / (t_N - t_1).
 */
inline double zero_crossing_frequency(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw InvalidParameter("times and values differ in length");
    std::vector<double> crossings;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double a = values[i - 1], b = values[i];
        if ((a < 0 && b >= 0) || (a > 0 && b <= 0)) {
            if (b == 0 && i + 1 < values.size() && ((a < 0) == (values[i + 1] < 0))) continue;  // touch, not a crossing
            crossings.push_back(times[i - 1] + (times[i] - times[i - 1]) * a / (a - b));
        }
    }
    if (crossings.size() < 2) throw ArityError("fewer than two zero crossings");
    return std::numbers::pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
}

/*!
 * Angular frequencies of a uniformly sampled sum of `count` sinusoids plus a
 * constant, by linear prediction (Prony): the first differences obey a
 * recurrence of order 2 count whose characteristic roots are exp(+-i w h).
 * Returns the `count` frequencies with positive phase, ascending. The sample
 * spacing h must satisfy w h < pi for every component.
 */
inline std::vector<double> prony_frequencies(std::span<const double> values, double spacing, std::size_t count) {
    if (!(spacing > 0)) throw InvalidParameter("sample spacing must be positive");
    if (count == 0) return {};
    const std::size_t order = 2 * count;
    if (values.size() < 3 * order + 2) throw ArityError("too few samples for the requested number of frequencies");

    std::vector<double> d(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) d[i] = values[i + 1] - values[i];

    const auto rows = static_cast<Eigen::Index>(d.size() - order);
    const auto cols = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index n = 0; n < rows; ++n) {
        for (Eigen::Index k = 0; k < cols; ++k) a(n, k) = d[static_cast<std::size_t>(n + cols - 1 - k)];
        b(n) = d[static_cast<std::size_t>(n + cols)];
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);

    // z^M = c_1 z^{M-1} + ... + c_M
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(cols, cols);
    for (Eigen::Index k = 0; k < cols; ++k) companion(0, k) = coef(k);
    for (Eigen::Index k = 1; k < cols; ++k) companion(k, k - 1) = 1.0;
    const Eigen::VectorXcd roots = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();

    std::vector<double> w;
    for (Eigen::Index k = 0; k < roots.size(); ++k)
        if (std::arg(roots(k)) > 0) w.push_back(std::arg(roots(k)) / spacing);
    std::sort(w.begin(), w.end());
    if (w.size() != count) throw DegeneracyError("signal does not resolve into the requested number of frequencies");
    return w;
}

/// v^0 of the free solution at tau.
inline double v0_at(const FreeSolution& sol, double tau) {
    return sol.p[0] / sol.params.mass() + sol.E[0] * std::cos(sol.omega * tau) + sol.H[0] * std::sin(sol.omega * tau);
}

struct TimeDilation {
    double mean_v0;  ///< period average of dt/dtau
    double lorentz;  ///< p^0 / m
    double v0_min;
    double v0_max;
};

/// dt/dtau averaged over one Compton period, compared with the CM Lorentz factor.
inline TimeDilation mean_time_dilation(const FreeSolution& sol) {
    const double mean = sol.p[0] / sol.params.mass();
    const double amplitude = std::hypot(sol.E[0], sol.H[0]);
    return {mean, mean, mean - amplitude, mean + amplitude};
}

struct SuperluminalReport {
    double max_speed;  ///< max over a period of |v_vec| / v^0, in units of c
    double cm_speed;   ///< |p_vec| / p^0
    bool superluminal() const noexcept { return max_speed > 1.0; }
    bool cm_subluminal() const noexcept { return cm_speed < 1.0; }
};

/*!
 * Instantaneous coordinate speed |dx/dt| = |v_vec|/v^0 (x^0 = ct) maximised
 * over one period, and the centre-of-mass speed |p_vec|/p^0. Nothing is
 * clamped: the instantaneous speed may exceed c.
 */
inline SuperluminalReport check_superluminal(const FreeSolution& sol) {
    const double period = 2.0 * std::numbers::pi / sol.omega;
    auto speed = [&](double tau) {
        const auto k = eval_free(sol, tau);
        if (!(k.v[0] > 0)) return std::numeric_limits<double>::infinity();
        return norm(k.v.space()) / k.v[0];
    };
    constexpr int samples = 4096;
    int best = 0;
    double best_speed = -1;
    for (int i = 0; i < samples; ++i) {
        const double s = speed(period * i / samples);
        if (s > best_speed) {
            best_speed = s;
            best = i;
        }
    }
    if (std::isfinite(best_speed)) {
        // golden-section refinement on the bracketing cell pair
        double lo = period * (best - 1) / samples, hi = period * (best + 1) / samples;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 60; ++it) {
            const double c1 = hi - g * (hi - lo), c2 = lo + g * (hi - lo);
            if (speed(c1) > speed(c2))
                hi = c2;
            else
                lo = c1;
        }
        best_speed = std::max(best_speed, speed(0.5 * (lo + hi)));
    }
    return {best_speed, norm(sol.p.space()) / sol.p[0]};
}

}  // namespace zitterkit
