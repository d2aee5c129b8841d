#pragma once
//
// Residual suites behind `zitterkit verify`: classical brackets, the Dirac
// operator identities and the trajectory monitors, on one model.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "zitterkit/brackets.hpp"
#include "zitterkit/cli/run.hpp"
#include "zitterkit/cli/scenario.hpp"
#include "zitterkit/dirac_check.hpp"
#include "zitterkit/dynamics.hpp"
#include "zitterkit/rng.hpp"

namespace zitterkit::cli {

struct Check {
    std::string suite;
    std::string identity;
    double max = 0;
    double tolerance = 0;
    long worst_point = -1;  ///< index of the random point attaining max, -1 when not point-based

    bool ok() const noexcept { return max <= tolerance; }  // NaN fails
};

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::optional<int> points;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    ModelParams params = ModelParams::physical(1.0);
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
    }
    const Check* find(const std::string& suite, const std::string& identity) const {
        for (const auto& c : checks)
            if (c.suite == suite && c.identity == identity) return &c;
        return nullptr;
    }
};

namespace detail {

inline void track(Check& c, double value, long point) {
    if (!std::isnan(c.max) && (std::isnan(value) || value > c.max)) {
        c.max = value;
        c.worst_point = point;
    }
}

inline void bracket_suite(VerifyReport& rep, int points) {
    const auto& params = rep.params;
    if (params.order() != 1) throw ScenarioError("bracket suite needs an n = 1 model");
    SplitMix64 rng(rep.seed);
    std::vector<Check> c = {{"brackets", "{H,p}", 0, 1e-9},
                            {"brackets", "{H,x} - q", 0, 1e-9},
                            {"brackets", "{H,q} - pi/k1", 0, 1e-9},
                            {"brackets", "{H,pi} + (p - m q)", 0, 1e-9},
                            {"brackets", "{H,S} - (p q - q p)", 0, 1e-9}};
    for (int i = 0; i < points; ++i) {
        std::array<double, PhasePoint::dimension> z{};
        for (auto& v : z) v = rng.uniform(-1, 1);
        const auto r = verify_appendix(params, PhasePoint::from_coordinates(z, 0));
        track(c[0], r.momentum, i);
        track(c[1], r.position, i);
        track(c[2], r.velocity, i);
        track(c[3], r.pi, i);
        track(c[4], r.spin, i);
    }
    rep.checks.insert(rep.checks.end(), c.begin(), c.end());
    char buf[160];
    std::snprintf(buf, sizeof buf, "bracket orientation %+g: the literal bracket is negated so that {H,x} = +q", kBracketOrientation);
    rep.notes.emplace_back(buf);
}

inline void dirac_suite(VerifyReport& rep, int points) {
    const double m = rep.params.mass();
    SplitMix64 rng(rep.seed ^ 0xd1ac0000ULL);
    rep.checks.push_back({"dirac", "clifford", clifford_residual(), 1e-15});

    std::vector<Check> c = {{"dirac", "(a) -i[H,p]", 0, 1e-12},
                            {"dirac", "(b) -i[H,S] - (p g - g p)", 0, 1e-12},
                            {"dirac", "(c) -i[H,g] - 4 S p", 0, 1e-12},
                            {"dirac", "(d) -i[H,a] + 4 p^2 g - 4 p pslash", 0, 1e-12}};
    double lb_min = INFINITY, lb_max = -INFINITY, lc_min = INFINITY, lc_max = -INFINITY, ld_min = INFINITY, ld_max = -INFINITY;
    for (int i = 0; i < points; ++i) {
        const FourVector p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto r = verify_heisenberg(p, m);
        track(c[0], r.momentum, i);
        track(c[1], r.spin, i);
        track(c[2], r.acceleration, i);
        track(c[3], r.jerk, i);
        lb_min = std::min(lb_min, r.literal_factor_spin), lb_max = std::max(lb_max, r.literal_factor_spin);
        lc_min = std::min(lc_min, r.literal_factor_acceleration), lc_max = std::max(lc_max, r.literal_factor_acceleration);
        ld_min = std::min(ld_min, r.literal_factor_jerk), ld_max = std::max(ld_max, r.literal_factor_jerk);
    }
    rep.checks.insert(rep.checks.end(), c.begin(), c.end());

    const int onshell = std::max(1, points * 2 / 5);
    Check zbw{"dirac", "on-shell P(g - p/m + adot/4m^2)P", 0, 1e-12};
    Check jerk{"dirac", "on-shell P(adot + 4m^2 g - 4m p)P", 0, 1e-12};
    Check proj{"dirac", "on-shell projector vs eigenspace", 0, 1e-12};
    for (int i = 0; i < onshell; ++i) {
        const ThreeVector k{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const FourVector p(std::sqrt(m * m + dot(k, k)), k);
        const auto r = verify_onshell_zbw(p, m);
        track(zbw, r.zbw_identity, i);
        track(jerk, r.jerk_reduction, i);
        track(proj, r.projector_mismatch, i);
    }
    rep.checks.insert(rep.checks.end(), {zbw, jerk, proj});

    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "Heisenberg orientation: Gdot = -i[H,G]; literal +i[H,G] gives factors (b) %.6g..%.6g, (c) %.6g..%.6g, "
                  "(d) %.6g..%.6g times the stated right-hand sides",
                  lb_min, lb_max, lc_min, lc_max, ld_min, ld_max);
    rep.notes.emplace_back(buf);
    std::snprintf(buf, sizeof buf, "on-shell momenta checked: %d", onshell);
    rep.notes.emplace_back(buf);
}

/// Standard free n = 1 run: the scenario's own free solution when given, else
/// p = (m,0,0,0), E = (0,0.1,0,0), H = (0,0,0.1,0), dt = 1e-3 over 10 pi.
inline void monitor_suite(VerifyReport& rep, const Scenario* scenario) {
    const auto& params = rep.params;
    if (params.order() != 1) throw ScenarioError("monitor suite needs an n = 1 model");
    FreeSolution sol = (scenario && scenario->kind == Kind::free)
                           ? free_solution(*scenario)
                           : make_free_solution(params, FourVector(params.mass(), 0, 0, 0), FourVector(0, 0.1, 0, 0),
                                                FourVector(0, 0, 0.1, 0));
    IntegratorSettings g{1e-3, 10 * std::numbers::pi, 1};
    if (scenario && scenario->kind == Kind::free) g = scenario->integrator;
    const auto traj = integrate_hamilton(phase_point_at(sol, 0), params, ScalarPotential::zero(), g);
    const auto m = monitor(traj, params);
    double zbw = 0;
    for (const auto& s : traj.states) zbw = std::max(zbw, sample_diagnostics(params, s, 0).zbw_residual);

    rep.checks.push_back({"monitors", "momentum drift", m.momentum_drift, 1e-12});
    rep.checks.push_back({"monitors", "hamiltonian drift (rel)", m.hamiltonian_drift, 1e-8});
    rep.checks.push_back({"monitors", "spin vector drift", m.spin_vector_drift, 1e-8});
    rep.checks.push_back({"monitors", "p.v - m", m.dirac_constraint, 1e-8});
    rep.checks.push_back({"monitors", "p^2 - m^2", m.mass_shell, 1e-8});
    rep.checks.push_back({"monitors", "S p + k1 m a", m.spin_momentum_identity, 1e-8});
    rep.checks.push_back({"monitors", "Sdot - (p v - v p) [fd]", m.spin_evolution, 1e-6});
    rep.checks.push_back({"monitors", "v - p/m + Sdot p/m^2 [fd]", m.zbw_equation, 1e-6});
    rep.checks.push_back({"monitors", "v - p/m + Wdot/m [fd]", m.zbw_symmetric, 1e-6});
    rep.checks.push_back({"monitors", "v - p/m + Sdot p/m^2 [eom]", zbw, 1e-8});
    char buf[160];
    std::snprintf(buf, sizeof buf, "monitor run: dt=%g, t_end=%.17g, %zu samples, H(0)=%.17g", g.dt, g.tau_end,
                  traj.states.size(), traj.hamiltonian.front());
    rep.notes.emplace_back(buf);
}

}  // namespace detail

/*!
 * Run the requested suites. Model parameters come from the scenario when one
 * is given (m = 1, hbar = c = 1, n = 1 otherwise).
 */
inline VerifyReport run_verify(const VerifyOptions& opt, const Scenario* scenario = nullptr) {
    const std::string& suite = opt.suite;
    if (suite != "all" && suite != "brackets" && suite != "dirac" && suite != "monitors")
        throw ScenarioError("unknown suite '" + suite + "' (all, brackets, dirac, monitors)");
    if (opt.points && *opt.points < 1) throw ScenarioError("--points must be at least 1");
    VerifyReport rep;
    rep.seed = opt.seed;
    if (scenario) rep.params = scenario->params();
    if (suite == "all" || suite == "brackets") detail::bracket_suite(rep, opt.points.value_or(100));
    if (suite == "all" || suite == "dirac") detail::dirac_suite(rep, opt.points.value_or(50));
    if (suite == "all" || suite == "monitors") detail::monitor_suite(rep, scenario);
    return rep;
}

inline void print_verify(std::ostream& out, const VerifyReport& rep) {
    char buf[256];
    out << "seed: " << rep.seed << '\n';
    std::snprintf(buf, sizeof buf, "model: m=%.17g n=%d hbar=%.17g c=%.17g\n", rep.params.mass(), rep.params.order(),
                  rep.params.hbar(), rep.params.c());
    out << buf;
    for (const auto& n : rep.notes) out << "note: " << n << '\n';
    out << '\n';
    for (const auto& c : rep.checks) {
        std::snprintf(buf, sizeof buf, "%-9s %-38s max=%-12.4e tol=%-8.0e %s", c.suite.c_str(), c.identity.c_str(), c.max,
                      c.tolerance, c.ok() ? "ok" : "FAIL");
        out << buf;
        if (!c.ok() && c.worst_point >= 0) out << " (point " << c.worst_point << ")";
        out << '\n';
    }

    // the same three equations, seen by each suite
    struct Row {
        const char* equation;
        std::vector<std::pair<const char*, const char*>> refs;
    };
    const std::vector<Row> rows = {
        {"momentum conservation", {{"brackets", "{H,p}"}, {"dirac", "(a) -i[H,p]"}, {"monitors", "momentum drift"}}},
        {"spin-tensor evolution",
         {{"brackets", "{H,S} - (p q - q p)"}, {"dirac", "(b) -i[H,S] - (p g - g p)"}, {"monitors", "Sdot - (p v - v p) [fd]"}}},
        {"Zitterbewegung equation",
         {{"brackets", "{H,q} - pi/k1"}, {"dirac", "on-shell P(g - p/m + adot/4m^2)P"}, {"monitors", "v - p/m + Sdot p/m^2 [fd]"}}},
    };
    out << "\ncoherence (same model for every suite):\n";
    for (const auto& row : rows) {
        out << "  " << row.equation << ':';
        for (const auto& [suite, id] : row.refs) {
            const Check* c = rep.find(suite, id);
            out << "  " << suite << '=' << (c ? (c->ok() ? "ok" : "FAIL") : "skipped");
        }
        out << '\n';
    }
    out << (rep.ok() ? "\nall residuals within tolerance\n" : "\ntolerance breach\n");
}

}  // namespace zitterkit::cli
