#include <gtest/gtest.h>

#include <cmath>

#include "zitterkit/brackets.hpp"
#include "zitterkit/dynamics.hpp"
#include "zitterkit/rng.hpp"

using namespace zitterkit;

namespace {

PhasePoint random_point(SplitMix64& rng) {
    std::array<double, PhasePoint::dimension> z{};
    for (auto& c : z) c = rng.uniform(-1, 1);
    return PhasePoint::from_coordinates(z, 0);
}

// A few smooth polynomial test functions of mixed variables.
PhaseFunction poly(int which) {
    switch (which) {
        case 0: return {"f0", [](const PhasePoint& s) { return s.x[1] * s.p[2] + s.q[0] * s.q[0]; }};
        case 1: return {"f1", [](const PhasePoint& s) { return s.pi[3] * s.x[0] - 0.5 * s.p[1] * s.q[2]; }};
        case 2: return {"f2", [](const PhasePoint& s) { return s.p[0] + s.pi[1] * s.pi[2] + s.x[3]; }};
        default: return {"f3", [](const PhasePoint& s) { return s.q[1] * s.x[2] - s.pi[0] * s.p[3]; }};
    }
}

}  // namespace

TEST(Brackets, ConjugatePairCarriesMetric) {
    SplitMix64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_point(rng);
        const auto dx = phase_gradient(phase::x(1), s), dp = phase_gradient(phase::p(1), s);
        EXPECT_NEAR(bracket_literal(dx, dp), -1.0, 1e-12);
        EXPECT_NEAR(poisson(phase::x(1), phase::p(1), s), -kBracketOrientation, 1e-12);
        EXPECT_NEAR(bracket_literal(phase_gradient(phase::x(0), s), phase_gradient(phase::p(0), s)), 1.0, 1e-12);
        EXPECT_NEAR(poisson(phase::q(2), phase::pi(2), s), -kBracketOrientation, 1e-12);
        EXPECT_NEAR(poisson(phase::x(1), phase::p(2), s), 0.0, 1e-12);
        EXPECT_EQ(poisson(phase::spin(0, 3), phase::spin(0, 3), s), 0.0);
    }
}

TEST(Brackets, HamiltonianConservesMomentum) {
    const auto params = ModelParams::physical(1.0);
    SplitMix64 rng(6);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_point(rng);
        for (std::size_t mu = 0; mu < 4; ++mu)
            EXPECT_LE(std::abs(poisson(phase::hamiltonian(params), phase::p(mu), s)), 1e-9);
    }
}

TEST(Brackets, Antisymmetry) {
    SplitMix64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto s = random_point(rng);
        const auto f = poly(i % 4), g = poly((i + 1 + i / 4) % 4);
        EXPECT_LE(std::abs(poisson(f, g, s) + poisson(g, f, s)), 1e-9);
    }
}

TEST(Brackets, Leibniz) {
    SplitMix64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto s = random_point(rng);
        const auto f = poly(i % 4), g = poly((i + 1) % 4), h = poly((i + 2) % 4);
        const PhaseFunction gh{"gh", [g, h](const PhasePoint& z) { return g(z) * h(z); }};
        const double lhs = poisson(f, gh, s);
        const double rhs = poisson(f, g, s) * h(s) + g(s) * poisson(f, h, s);
        EXPECT_LE(std::abs(lhs - rhs), 1e-7);
    }
}

TEST(Brackets, AppendixResiduals) {
    const auto params = ModelParams::physical(1.0);
    SplitMix64 rng(9);
    AppendixResiduals worst;
    for (int i = 0; i < 100; ++i) worst.absorb(verify_appendix(params, random_point(rng)));
    EXPECT_LE(worst.momentum, 1e-9);
    EXPECT_LE(worst.position, 1e-9);
    EXPECT_LE(worst.velocity, 1e-9);
    EXPECT_LE(worst.pi, 1e-9);
    EXPECT_LE(worst.spin, 1e-9);

    // other units: the velocity bracket is -(4 m c^4 / hbar^2) pi
    const auto other = ModelParams::physical(1.7, 0.8, 1.2);
    const auto s = random_point(rng);
    EXPECT_LE(verify_appendix(other, s).max(), 1e-9);
    const double coef = 4 * 1.7 * std::pow(1.2, 4) / (0.8 * 0.8);
    EXPECT_NEAR(poisson(phase::hamiltonian(other), phase::q(1), s), -coef * s.pi[1], 1e-8);

    EXPECT_THROW(verify_appendix(ModelParams::newtonian(1.0), s), UnsupportedOrder);
}

TEST(Brackets, SlowPointPiBracketVanishes) {
    const auto params = ModelParams::physical(2.0);
    const FourVector p(2.5, 0.3, -1.0, 0.4);
    const PhasePoint s{FourVector(1, 2, 3, 4), p, p / 2.0, FourVector{}};
    for (std::size_t mu = 0; mu < 4; ++mu)
        EXPECT_LE(std::abs(poisson(phase::hamiltonian(params), phase::pi(mu), s)), 1e-10);
}

TEST(Brackets, Linearity) {
    const auto params = ModelParams::physical(1.0);
    SplitMix64 rng(10);
    const auto s = random_point(rng);
    const auto h = phase::hamiltonian(params);
    const PhaseFunction scaled{"3H", [h](const PhasePoint& z) { return 3.0 * h(z); }};
    for (std::size_t mu = 0; mu < 4; ++mu) {
        EXPECT_NEAR(poisson(scaled, phase::q(mu), s), 3.0 * poisson(h, phase::q(mu), s), 1e-9);
        EXPECT_NEAR(poisson(scaled, phase::x(mu), s), 3.0 * poisson(h, phase::x(mu), s), 1e-9);
    }
}

TEST(Brackets, MatchesTrajectoryDerivatives) {
    const auto params = ModelParams::physical(1.0);
    const auto pot = ScalarPotential::spatial_harmonic(-0.3);
    auto s0 = phase_point_at(make_free_solution(params, FourVector(std::sqrt(2.0), 1, 0, 0), FourVector(0, 0, 0.1, 0),
                                                FourVector(0.1, 0.1 * std::sqrt(2.0), 0, 0)),
                             0);
    s0.x = FourVector(0, 0.5, -0.4, 0.2);
    const double dt = 1e-3;
    const auto traj = integrate_hamilton(s0, params, pot, {dt, 1.0, 1});
    const auto h = phase::hamiltonian(params, pot);
    double worst = 0;
    for (std::size_t i = 2; i + 2 < traj.states.size(); i += 97) {
        const auto& st = traj.states;
        auto fd = [&](auto get, std::size_t mu) {
            return (-get(st[i + 2])[mu] + 8 * get(st[i + 1])[mu] - 8 * get(st[i - 1])[mu] + get(st[i - 2])[mu]) / (12 * dt);
        };
        for (std::size_t mu = 0; mu < 4; ++mu) {
            worst = std::max(worst, std::abs(poisson(h, phase::x(mu), st[i]) - fd([](const PhasePoint& z) { return z.x; }, mu)));
            worst = std::max(worst, std::abs(poisson(h, phase::p(mu), st[i]) - fd([](const PhasePoint& z) { return z.p; }, mu)));
            worst = std::max(worst, std::abs(poisson(h, phase::q(mu), st[i]) - fd([](const PhasePoint& z) { return z.q; }, mu)));
            worst = std::max(worst, std::abs(poisson(h, phase::pi(mu), st[i]) - fd([](const PhasePoint& z) { return z.pi; }, mu)));
        }
    }
    EXPECT_LE(worst, 1e-6);
}
