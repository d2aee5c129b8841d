#pragma once
//
// Classical fixed-step fourth-order Runge-Kutta on flat real state vectors
// (std::array<double, N> or std::vector<double>).
//

#include <cmath>
#include <cstddef>

namespace zitterkit {

template <class State>
bool all_finite(const State& y) noexcept {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

/*!
 * One RK4 step y(t) -> y(t + h) for dy/dt = rhs(t, y).
 *
 * \c rhs has signature State(double t, const State& y).
 */
template <class State, class Rhs>
void rk4_step(Rhs&& rhs, double t, State& y, double h) {
    const std::size_t n = y.size();
    State tmp = y;

    const State k1 = rhs(t, y);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const State k2 = rhs(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const State k3 = rhs(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    const State k4 = rhs(t + h, tmp);

    for (std::size_t i = 0; i < n; ++i) y[i] += h * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) / 6.0;
}

}  // namespace zitterkit
