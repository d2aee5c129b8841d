#pragma once
//
// Three-dimensional non-relativistic limit (tau -> t).
//
//     p_vec = m v + kappa adot,          kappa = hbar^2 / (4 m c^4)
//     F     = m a + kappa addot
//     T     = 1/2 m v^2 - kappa (a^2/2 - adot.v),   E = T + U conserved
//
// The non-Newtonian part of T is the classical analogue of the quantum
// potential (hbar^2/4m)[1/2 (grad rho/rho)^2 - lap rho/rho]. Because it can
// be negative, v^2 > 0 is possible where U > E.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zitterkit/dynamics.hpp"
#include "zitterkit/error.hpp"
#include "zitterkit/lagrangian.hpp"
#include "zitterkit/minkowski.hpp"
#include "zitterkit/rk4.hpp"

namespace zitterkit {

/// Position and the first three time derivatives (j = adot).
struct KinState3D {
    double t = 0;
    ThreeVector x, v, a, j;
};

//---------------------------------------------------------------------------//
// Potential3D
//---------------------------------------------------------------------------//
class Potential3D {
public:
    using ValueFn = std::function<double(const ThreeVector&)>;
    using GradFn = std::function<ThreeVector(const ThreeVector&)>;

    Potential3D(std::string name, ValueFn value, GradFn gradient)
        : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)) {}

    static Potential3D zero() {
        return {"zero", [](const ThreeVector&) { return 0.0; }, [](const ThreeVector&) { return ThreeVector{}; }};
    }

    /// Uniform force F: U = -F.x
    static Potential3D uniform_force(const ThreeVector& f) {
        return {"uniform", [f](const ThreeVector& x) { return -dot(f, x); }, [f](const ThreeVector&) { return -f; }};
    }

    /// U = 1/2 k |x|^2
    static Potential3D harmonic(double k) {
        return {"harmonic", [k](const ThreeVector& x) { return 0.5 * k * dot(x, x); },
                [k](const ThreeVector& x) { return k * x; }};
    }

    /// U = U0 exp(-|x|^2 / (2 sigma^2))
    static Potential3D gaussian_barrier(double height, double sigma) {
        if (!(sigma > 0)) throw InvalidParameter("barrier width must be positive");
        const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
        return {"gaussian_barrier", [=](const ThreeVector& x) { return height * std::exp(-dot(x, x) * inv2s2); },
                [=](const ThreeVector& x) { return (-2.0 * inv2s2 * height * std::exp(-dot(x, x) * inv2s2)) * x; }};
    }

    /// U = U0 / (1 + exp(-x/sigma)), a smoothed step along x.
    static Potential3D smoothed_step(double height, double sigma) {
        if (!(sigma > 0)) throw InvalidParameter("step width must be positive");
        return {"smoothed_step",
                [=](const ThreeVector& x) { return height / (1.0 + std::exp(-x.x / sigma)); },
                [=](const ThreeVector& x) {
                    // U0 e^{-x/s} / (s (1 + e^{-x/s})^2), written to avoid overflow for x << 0
                    const double e = std::exp(-std::abs(x.x) / sigma);
                    return ThreeVector{height * e / (sigma * (1.0 + e) * (1.0 + e)), 0.0, 0.0};
                }};
    }

    const std::string& name() const noexcept { return name_; }
    double operator()(const ThreeVector& x) const { return value_(x); }
    ThreeVector gradient(const ThreeVector& x) const { return gradient_(x); }
    ThreeVector force(const ThreeVector& x) const { return -gradient_(x); }

    ThreeVector numeric_gradient(const ThreeVector& x, double h = 1e-5) const {
        ThreeVector g;
        for (std::size_t i = 0; i < 3; ++i) {
            ThreeVector xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            g[i] = (value_(xp) - value_(xm)) / (2.0 * h);
        }
        return g;
    }

private:
    std::string name_;
    ValueFn value_;
    GradFn gradient_;
};

//---------------------------------------------------------------------------//
// Energetics
//---------------------------------------------------------------------------//

struct EnergyBreakdown {
    double kinetic_newton = 0;  ///< 1/2 m v^2
    double kinetic_zbw = 0;     ///< -kappa (a^2/2 - adot.v)
    double kinetic = 0;         ///< T
    double potential = 0;       ///< U
    double total = 0;           ///< E = T + U
    double quantum_potential = 0;
};

/// p_vec = m v + kappa adot
inline ThreeVector nr_momentum(const ModelParams& params, const KinState3D& s) {
    return params.mass() * s.v + params.zbw_coefficient() * s.j;
}

/// -kappa (a^2/2 - adot.v): the classical counterpart of the quantum potential.
inline double quantum_potential_analogue(const ModelParams& params, const KinState3D& s) {
    return -params.zbw_coefficient() * (0.5 * dot(s.a, s.a) - dot(s.j, s.v));
}

inline EnergyBreakdown energy_breakdown(const ModelParams& params, const KinState3D& s, const Potential3D& pot) {
    EnergyBreakdown e;
    e.kinetic_newton = 0.5 * params.mass() * dot(s.v, s.v);
    e.kinetic_zbw = quantum_potential_analogue(params, s);
    e.kinetic = e.kinetic_newton + e.kinetic_zbw;
    e.potential = pot(s.x);
    e.total = e.kinetic + e.potential;
    e.quantum_potential = e.kinetic_zbw;
    return e;
}

/// addot = (F - m a) / kappa, the highest derivative of the force law.
inline ThreeVector snap(const ModelParams& params, const KinState3D& s, const Potential3D& pot) {
    const double kappa = params.zbw_coefficient();
    if (!(kappa > 0)) throw UnsupportedOrder("the fourth-order force law needs n = 1");
    return (pot.force(s.x) - params.mass() * s.a) / kappa;
}

//---------------------------------------------------------------------------//
// Integration
//---------------------------------------------------------------------------//

struct Trajectory3D {
    std::vector<KinState3D> states;
    std::vector<EnergyBreakdown> energy;
};

/*!
 * RK4 integration of the non-relativistic motion.
 *
 * n = 1: the fourth-order law on (x, v, a, j),
 *        jdot = (4 m c^4/hbar^2) (F - m a).
 * n = 0: ordinary Newtonian motion on (x, v); the recorded a = F/m and
 *        j = dF/dt / m (directional central difference), with zero
 *        non-Newtonian energy. This is the control integrator.
 */
inline Trajectory3D integrate_nr(const KinState3D& s0, const ModelParams& params, const Potential3D& pot,
                                 const IntegratorSettings& settings) {
    const long steps = detail::step_count(settings);
    const int n = params.order();
    if (n > 1) throw UnsupportedOrder("non-relativistic integration supports n = 0 and n = 1");
    const double m = params.mass();
    const double dt = settings.dt;
    const double t0 = s0.t;

    Trajectory3D traj;
    const auto samples = static_cast<std::size_t>(steps / settings.stride + 1);
    traj.states.reserve(samples);
    traj.energy.reserve(samples);
    auto record = [&](const KinState3D& s) {
        traj.states.push_back(s);
        traj.energy.push_back(energy_breakdown(params, s, pot));
    };

    if (n == 0) {
        using State = std::array<double, 6>;
        auto rhs = [&](double, const State& y) {
            const ThreeVector f = pot.force({y[0], y[1], y[2]});
            return State{y[3], y[4], y[5], f.x / m, f.y / m, f.z / m};
        };
        auto to_state = [&](const State& y, double t) {
            KinState3D s;
            s.t = t;
            s.x = {y[0], y[1], y[2]};
            s.v = {y[3], y[4], y[5]};
            s.a = pot.force(s.x) / m;
            const double speed = norm(s.v);
            if (speed > 0) {
                const double delta = 1e-6 * (1.0 + norm(s.x));
                const ThreeVector dir = s.v / speed;
                s.j = (speed / (2.0 * delta * m)) * (pot.force(s.x + delta * dir) - pot.force(s.x - delta * dir));
            }
            return s;
        };
        State y{s0.x.x, s0.x.y, s0.x.z, s0.v.x, s0.v.y, s0.v.z};
        if (!all_finite(y)) throw InvalidParameter("initial state is not finite");
        record(to_state(y, t0));
        for (long i = 1; i <= steps; ++i) {
            const double t = t0 + static_cast<double>(i - 1) * dt;
            rk4_step(rhs, t, y, dt);
            if (!all_finite(y)) throw IntegrationDiverged("Newtonian integration produced a non-finite state", t);
            if (i % settings.stride == 0) record(to_state(y, t0 + static_cast<double>(i) * dt));
        }
        return traj;
    }

    const double inv_kappa = 1.0 / params.zbw_coefficient();
    using State = std::array<double, 12>;
    auto rhs = [&](double, const State& y) {
        const ThreeVector f = pot.force({y[0], y[1], y[2]});
        State d{};
        for (std::size_t i = 0; i < 9; ++i) d[i] = y[i + 3];
        d[9] = inv_kappa * (f.x - m * y[6]);
        d[10] = inv_kappa * (f.y - m * y[7]);
        d[11] = inv_kappa * (f.z - m * y[8]);
        return d;
    };
    auto to_state = [](const State& y, double t) {
        return KinState3D{t, {y[0], y[1], y[2]}, {y[3], y[4], y[5]}, {y[6], y[7], y[8]}, {y[9], y[10], y[11]}};
    };
    State y{s0.x.x, s0.x.y, s0.x.z, s0.v.x, s0.v.y, s0.v.z, s0.a.x, s0.a.y, s0.a.z, s0.j.x, s0.j.y, s0.j.z};
    if (!all_finite(y)) throw InvalidParameter("initial state is not finite");
    record(to_state(y, t0));
    for (long i = 1; i <= steps; ++i) {
        const double t = t0 + static_cast<double>(i - 1) * dt;
        rk4_step(rhs, t, y, dt);
        if (!all_finite(y)) throw IntegrationDiverged("fourth-order integration produced a non-finite state", t);
        if (i % settings.stride == 0) record(to_state(y, t0 + static_cast<double>(i) * dt));
    }
    return traj;
}

/// Trapezoidal work integral of F.v dt along the trajectory.
inline double work_integral(const Trajectory3D& traj, const Potential3D& pot) {
    if (traj.states.size() < 2) throw ArityError("work integral needs at least two samples");
    double w = 0;
    double prev = dot(pot.force(traj.states[0].x), traj.states[0].v);
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const double cur = dot(pot.force(traj.states[i].x), traj.states[i].v);
        w += 0.5 * (prev + cur) * (traj.states[i].t - traj.states[i - 1].t);
        prev = cur;
    }
    return w;
}

/// max |E(t) - E(0)| / |E(0)| over the recorded samples.
inline double energy_drift(const Trajectory3D& traj) {
    if (traj.energy.empty()) return 0;
    const double e0 = traj.energy.front().total;
    const double scale = std::abs(e0) > 0 ? std::abs(e0) : 1.0;
    double d = 0;
    for (const auto& e : traj.energy) d = std::max(d, std::abs(e.total - e0) / scale);
    return d;
}

//---------------------------------------------------------------------------//
// Barrier crossing
//---------------------------------------------------------------------------//

/// A maximal stretch of samples with U > E_total and v^2 > 0.
struct BarrierInterval {
    double t_start;
    double t_end;
    double max_excess;  ///< max U - E over the interval
    double min_speed2;  ///< min v^2 over the interval
};

struct BarrierOptions {
    double margin = 1e-12;  ///< strict inequalities are U - E > margin and v^2 > margin
    int merge_gap = 3;      ///< merge intervals separated by fewer than this many samples
};

/*!
 * Classically forbidden stretches that the particle traverses with nonzero
 * speed. Uses the energy recorded per sample.
 */
inline std::vector<BarrierInterval> barrier_report(const Trajectory3D& traj, const Potential3D& pot, const BarrierOptions& opt = {}) {
    struct Run {
        std::size_t first, last;
        double excess, speed2;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& s = traj.states[i];
        const double excess = pot(s.x) - traj.energy[i].total;
        const double speed2 = dot(s.v, s.v);
        if (!(excess > opt.margin && speed2 > opt.margin)) continue;
        if (!runs.empty() && i - runs.back().last - 1 < static_cast<std::size_t>(opt.merge_gap)) {
            auto& r = runs.back();
            r.last = i;
            r.excess = std::max(r.excess, excess);
            r.speed2 = std::min(r.speed2, speed2);
        } else {
            runs.push_back({i, i, excess, speed2});
        }
    }
    std::vector<BarrierInterval> out;
    out.reserve(runs.size());
    for (const auto& r : runs) out.push_back({traj.states[r.first].t, traj.states[r.last].t, r.excess, r.speed2});
    return out;
}

}  // namespace zitterkit
