#pragma once
//
// Scenario execution: trajectories as column tables, plus a summary of
// conserved-quantity drifts, identity residuals and barrier intervals.
//

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zitterkit/cli/scenario.hpp"
#include "zitterkit/dynamics.hpp"
#include "zitterkit/nonrel.hpp"

namespace zitterkit::cli {

using ojson = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunResult {
    Table table;
    ojson summary = ojson::object();
};

inline std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline void write_csv(std::ostream& out, const Table& t, int precision) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i], precision);
        out << '\n';
    }
}

/// JSON output always carries round-trip (shortest exact) numbers.
inline void write_json(std::ostream& out, const Table& t, const ojson& summary) {
    ojson doc;
    doc["columns"] = t.columns;
    doc["rows"] = t.rows;
    doc["summary"] = summary;
    out << doc.dump() << '\n';
}

/// Indented "key: value" rendering of the summary.
inline void print_summary(std::ostream& out, const ojson& j, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out << pad << key << ":\n";
            print_summary(out, value, indent + 2);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            out << pad << key << ":\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                out << pad << "  [" << i << "]\n";
                print_summary(out, value[i], indent + 4);
            }
        } else if (value.is_number_float()) {
            out << pad << key << ": " << format_number(value.get<double>(), 10) << '\n';
        } else {
            out << pad << key << ": " << value.dump() << '\n';
        }
    }
}

namespace detail {

inline void push4(std::vector<double>& row, const FourVector& v) { row.insert(row.end(), v.c.begin(), v.c.end()); }
inline void push3(std::vector<double>& row, const ThreeVector& v) { row.insert(row.end(), {v.x, v.y, v.z}); }

inline std::vector<std::string> indexed(const char* base, int from, int to) {
    std::vector<std::string> r;
    for (int i = from; i <= to; ++i) r.push_back(base + std::to_string(i));
    return r;
}

inline ojson model_summary(const Scenario& s) {
    const auto params = s.params();
    ojson m;
    m["mass"] = params.mass();
    m["n"] = params.order();
    m["hbar"] = params.hbar();
    m["c"] = params.c();
    if (params.order() >= 1) m["k1"] = params.k1();
    if (params.order() == 1) m["compton_frequency"] = params.compton_frequency();
    return m;
}

inline ojson integrator_summary(const IntegratorSettings& g, std::size_t samples) {
    ojson j;
    j["dt"] = g.dt;
    j["t_end"] = g.tau_end;
    j["stride"] = g.stride;
    j["samples"] = samples;
    return j;
}

inline RunResult run_hamilton(const Scenario& s) {
    const auto params = s.params();
    if (params.order() != 1) throw UnsupportedOrder("kinds free and hamilton need n = 1");
    const auto pot = scalar_potential(s.potential);
    const auto s0 = phase_point(s);
    const auto traj = integrate_hamilton(s0, params, pot, s.integrator);

    RunResult r;
    auto& cols = r.table.columns;
    cols = {"tau"};
    for (const char* base : {"x", "v", "a"})
        for (const auto& c : indexed(base, 0, 3)) cols.push_back(c);
    for (const char* c : {"H", "s1", "s2", "s3", "res_zbw", "res_pv"}) cols.emplace_back(c);

    double max_zbw = 0, max_speed = 0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& st = traj.states[i];
        const auto d = sample_diagnostics(params, st, pot(st.x));
        std::vector<double> row{traj.tau[i]};
        push4(row, st.x);
        push4(row, st.q);
        push4(row, st.pi / params.k1());
        row.insert(row.end(), {d.hamiltonian, d.spin.x, d.spin.y, d.spin.z, d.zbw_residual, d.dirac_residual});
        r.table.rows.push_back(std::move(row));
        max_zbw = std::max(max_zbw, d.zbw_residual);
        max_speed = std::max(max_speed, norm(st.q.space()) / st.q[0]);
    }

    auto& sum = r.summary;
    sum["scenario"] = s.name;
    sum["kind"] = to_string(s.kind);
    sum["model"] = model_summary(s);
    sum["integrator"] = integrator_summary(s.integrator, traj.states.size());
    sum["initial_hamiltonian"] = traj.hamiltonian.front();

    if (traj.states.size() >= 5) {
        const auto m = monitor(traj, params);
        ojson mon;
        mon["momentum_drift"] = m.momentum_drift;
        mon["hamiltonian_drift_rel"] = m.hamiltonian_drift;
        mon["spin_vector_drift"] = m.spin_vector_drift;
        mon["dirac_constraint"] = m.dirac_constraint;
        mon["mass_shell"] = m.mass_shell;
        mon["spin_evolution"] = m.spin_evolution;
        mon["zbw_equation_fd"] = m.zbw_equation;
        mon["zbw_symmetric_fd"] = m.zbw_symmetric;
        mon["spin_momentum_identity"] = m.spin_momentum_identity;
        mon["zbw_equation_analytic"] = max_zbw;
        mon["max_oscillation_square"] = m.max_oscillation_square;
        if (s.potential.type != "zero") mon["note"] = "momentum and spin are not conserved in a potential";
        sum["monitors"] = mon;
    }
    sum["max_coordinate_speed_over_c"] = max_speed;

    if (s.kind == Kind::free) {
        const auto sol = free_solution(s);
        double ex = 0, ev = 0;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const auto k = eval_free(sol, traj.tau[i]);
            ex = std::max(ex, max_abs(traj.states[i].x - k.x));
            ev = std::max(ev, max_abs(traj.states[i].q - k.v));
        }
        ojson cf;
        cf["max_error_x"] = ex;
        cf["max_error_v"] = ev;
        sum["closed_form"] = cf;

        const auto td = mean_time_dilation(sol);
        ojson t;
        t["mean_v0"] = td.mean_v0;
        t["lorentz_factor"] = td.lorentz;
        t["v0_min"] = td.v0_min;
        t["v0_max"] = td.v0_max;
        sum["time_dilation"] = t;

        const auto sl = check_superluminal(sol);
        ojson sp;
        sp["max_speed"] = sl.max_speed;
        sp["cm_speed"] = sl.cm_speed;
        sp["superluminal"] = sl.superluminal();
        sp["cm_subluminal"] = sl.cm_subluminal();
        sum["speed"] = sp;

        if (max_abs(sol.E) > 0 || max_abs(sol.H) > 0) {
            // zero crossings of the oscillating part along its largest spatial axis
            std::size_t axis = 1;
            for (std::size_t mu = 2; mu < 4; ++mu)
                if (std::abs(sol.E[mu]) + std::abs(sol.H[mu]) > std::abs(sol.E[axis]) + std::abs(sol.H[axis])) axis = mu;
            std::vector<double> osc;
            for (const auto& st : traj.states) osc.push_back(st.q[axis] - sol.p[axis] / params.mass());
            try {
                ojson f;
                f["measured"] = zero_crossing_frequency(traj.tau, osc);
                f["expected"] = params.compton_frequency();
                sum["frequency"] = f;
            } catch (const ArityError&) {
                // run shorter than one oscillation
            }
        }
    }
    return r;
}

inline RunResult run_general(const Scenario& s) {
    const auto params = s.params();
    const auto init = deriv_stack(s);
    const auto traj = integrate_free_general_n(params, four(s.initial, "x0"), init, s.integrator);
    const std::size_t depth = traj.stacks.front().size();

    RunResult r;
    auto& cols = r.table.columns;
    cols = {"tau"};
    for (const auto& c : indexed("x", 0, 3)) cols.push_back(c);
    for (std::size_t d = 0; d < depth; ++d)
        for (const auto& c : indexed(("d" + std::to_string(d) + "v").c_str(), 0, 3)) cols.push_back(c);
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        std::vector<double> row{traj.tau[i]};
        push4(row, traj.x[i]);
        for (const auto& v : traj.stacks[i]) push4(row, v);
        r.table.rows.push_back(std::move(row));
    }

    auto& sum = r.summary;
    sum["scenario"] = s.name;
    sum["kind"] = to_string(s.kind);
    sum["model"] = model_summary(s);
    sum["model"]["k"] = params.k();
    sum["integrator"] = integrator_summary(s.integrator, traj.tau.size());
    sum["momentum"] = std::vector<double>(traj.p.c.begin(), traj.p.c.end());

    const auto expected = characteristic_frequencies(params);
    ojson f;
    f["characteristic"] = expected;
    if (!expected.empty() && traj.tau.size() > 1) {
        // the spatial component with the largest excursion
        std::size_t axis = 1;
        double best = -1;
        for (std::size_t mu = 1; mu < 4; ++mu) {
            double lo = traj.stacks[0][0][mu], hi = lo;
            for (const auto& st : traj.stacks) lo = std::min(lo, st[0][mu]), hi = std::max(hi, st[0][mu]);
            if (hi - lo > best) best = hi - lo, axis = mu;
        }
        std::vector<double> series;
        for (const auto& st : traj.stacks) series.push_back(st[0][axis]);
        try {
            f["measured"] = prony_frequencies(series, traj.tau[1] - traj.tau[0], expected.size());
            f["axis"] = axis;
        } catch (const Error& e) {
            f["measured_error"] = e.what();
        }
    }
    sum["frequencies"] = f;
    return r;
}

inline RunResult run_nonrel(const Scenario& s) {
    const auto params = s.params();
    const auto pot = potential_3d(s.potential);
    auto s0 = kin_state(s);
    if (params.order() == 0) {
        s0.a = pot.force(s0.x) / params.mass();
    }
    const auto traj = integrate_nr(s0, params, pot, s.integrator);

    RunResult r;
    r.table.columns = {"t", "x1", "x2", "x3", "v1", "v2", "v3", "a1", "a2", "a3", "j1", "j2", "j3",
                       "T_newton", "T_zbw", "T", "U", "E_total"};
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& st = traj.states[i];
        const auto& e = traj.energy[i];
        std::vector<double> row{st.t};
        push3(row, st.x);
        push3(row, st.v);
        push3(row, st.a);
        push3(row, st.j);
        row.insert(row.end(), {e.kinetic_newton, e.kinetic_zbw, e.kinetic, e.potential, e.total});
        r.table.rows.push_back(std::move(row));
    }

    auto& sum = r.summary;
    sum["scenario"] = s.name;
    sum["kind"] = to_string(s.kind);
    sum["model"] = model_summary(s);
    sum["potential"] = pot.name();
    sum["integrator"] = integrator_summary(s.integrator, traj.states.size());

    ojson en;
    en["initial_total"] = traj.energy.front().total;
    en["final_total"] = traj.energy.back().total;
    en["total_drift_rel"] = energy_drift(traj);
    if (traj.states.size() >= 2) {
        const double dT = traj.energy.back().kinetic - traj.energy.front().kinetic;
        const double w = work_integral(traj, pot);
        en["delta_T"] = dT;
        en["work"] = w;
        en["work_minus_delta_T"] = w - dT;
    }
    sum["energy"] = en;

    ojson bars = ojson::array();
    for (const auto& b : barrier_report(traj, pot)) {
        ojson j;
        j["t_start"] = b.t_start;
        j["t_end"] = b.t_end;
        j["max_excess"] = b.max_excess;
        j["min_speed2"] = b.min_speed2;
        bars.push_back(j);
    }
    sum["barrier_intervals"] = bars.size();
    if (!bars.empty()) sum["barrier"] = bars;
    sum["final_position"] = std::vector<double>{traj.states.back().x.x, traj.states.back().x.y, traj.states.back().x.z};
    return r;
}

}  // namespace detail

/// Execute a non-verify scenario. Throws IntegrationDiverged on blow-up.
inline RunResult run_scenario(const Scenario& s) {
    switch (s.kind) {
        case Kind::free:
        case Kind::hamilton: return detail::run_hamilton(s);
        case Kind::general_n: return detail::run_general(s);
        case Kind::nonrel: return detail::run_nonrel(s);
        case Kind::verify: break;
    }
    throw ScenarioError("kind 'verify' scenarios are run with the verify subcommand");
}

}  // namespace zitterkit::cli
