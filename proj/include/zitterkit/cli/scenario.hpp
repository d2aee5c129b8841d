#pragma once
//
// Scenario files: JSON documents describing one run. Parsing is strict;
// unknown keys are rejected with their dotted path.
//

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zitterkit/dynamics.hpp"
#include "zitterkit/error.hpp"
#include "zitterkit/lagrangian.hpp"
#include "zitterkit/nonrel.hpp"

namespace zitterkit::cli {

using nlohmann::json;

/// Malformed or invalid scenario (exit code 2).
class ScenarioError : public Error {
public:
    using Error::Error;
};

enum class Kind { free, hamilton, general_n, nonrel, verify };

inline const char* to_string(Kind k) {
    switch (k) {
        case Kind::free: return "free";
        case Kind::hamilton: return "hamilton";
        case Kind::general_n: return "general_n";
        case Kind::nonrel: return "nonrel";
        case Kind::verify: return "verify";
    }
    return "?";
}

struct PotentialSpec {
    std::string type = "zero";
    double k = 0;                       // harmonic / spatial_harmonic
    double height = 0, sigma = 1;       // gaussian_barrier / smoothed_step
    ThreeVector force;                  // uniform
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";
    int precision = 17;
};

struct VerifySpec {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::optional<int> points;
};

struct Scenario {
    std::string name;
    Kind kind = Kind::free;
    double hbar = 1, c = 1;
    double mass = 1;
    int order = 1;
    std::vector<double> k;  // empty: physical coefficients
    json initial = json::object();
    PotentialSpec potential;
    IntegratorSettings integrator;
    double t_end_periods = 0;  // nonzero: t_end given in Compton periods
    OutputSpec output;
    VerifySpec verify;

    ModelParams params() const {
        if (!k.empty()) return ModelParams::with_coefficients(mass, k, hbar, c);
        if (order == 0) return ModelParams::newtonian(mass, hbar, c);
        if (order == 1) return ModelParams::physical(mass, hbar, c);
        throw InvalidParameter("model.n > 1 needs explicit coefficients model.k");
    }
};

//---------------------------------------------------------------------------//
// Parsing helpers
//---------------------------------------------------------------------------//
namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ScenarioError("'" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) throw ScenarioError("unknown key '" + join(path, key) + "'");
}

inline double number(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ScenarioError("missing field '" + join(path, key) + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_number()) throw ScenarioError("field '" + join(path, key) + "' must be a number");
    return v.get<double>();
}

inline int integer(const json& j, const std::string& key, const std::string& path, int fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ScenarioError("field '" + join(path, key) + "' must be an integer");
    return v.get<int>();
}

inline std::string text(const json& j, const std::string& key, const std::string& path, std::optional<std::string> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ScenarioError("missing field '" + join(path, key) + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_string()) throw ScenarioError("field '" + join(path, key) + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<double> numbers(const json& v, const std::string& where, std::size_t size) {
    if (!v.is_array() || (size && v.size() != size))
        throw ScenarioError("field '" + where + "' must be an array of " + std::to_string(size) + " numbers");
    std::vector<double> r;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ScenarioError("field '" + where + "." + std::to_string(i) + "' must be a number");
        r.push_back(v[i].get<double>());
    }
    return r;
}

inline PotentialSpec parse_potential(const json& j, const std::string& path, Kind kind) {
    PotentialSpec p;
    p.type = text(j, "type", path);
    if (kind == Kind::hamilton) {
        if (p.type == "zero") {
            only_keys(j, path, {"type"});
        } else if (p.type == "spatial_harmonic") {
            only_keys(j, path, {"type", "k"});
            p.k = number(j, "k", path);
        } else {
            throw ScenarioError("field '" + path + ".type': unknown 4-potential '" + p.type + "' (zero, spatial_harmonic)");
        }
        return p;
    }
    if (p.type == "zero") {
        only_keys(j, path, {"type"});
    } else if (p.type == "harmonic") {
        only_keys(j, path, {"type", "k"});
        p.k = number(j, "k", path);
    } else if (p.type == "gaussian_barrier" || p.type == "smoothed_step") {
        only_keys(j, path, {"type", "height", "sigma"});
        p.height = number(j, "height", path);
        p.sigma = number(j, "sigma", path);
        if (!(p.sigma > 0)) throw ScenarioError("field '" + path + ".sigma' must be positive");
    } else if (p.type == "uniform") {
        only_keys(j, path, {"type", "force"});
        const auto f = numbers(j.at("force"), path + ".force", 3);
        p.force = {f[0], f[1], f[2]};
    } else {
        throw ScenarioError("field '" + path + ".type': unknown potential '" + p.type +
                            "' (zero, harmonic, gaussian_barrier, smoothed_step, uniform)");
    }
    return p;
}

inline void check_initial(const json& j, Kind kind) {
    const std::string path = "initial";
    auto vec = [&](const char* key, std::size_t n, bool required) {
        if (!j.contains(key)) {
            if (required) throw ScenarioError("missing field '" + path + "." + key + "'");
            return;
        }
        numbers(j.at(key), path + "." + key, n);
    };
    switch (kind) {
        case Kind::free:
            only_keys(j, path, {"p", "E", "H", "x0", "project"});
            vec("p", 4, true), vec("E", 4, false), vec("H", 4, false), vec("x0", 4, false);
            if (j.contains("project") && !j.at("project").is_boolean())
                throw ScenarioError("field 'initial.project' must be a boolean");
            break;
        case Kind::hamilton:
            if (j.contains("q") || j.contains("pi")) {
                only_keys(j, path, {"x", "p", "q", "pi"});
                vec("x", 4, false), vec("p", 4, true), vec("q", 4, true), vec("pi", 4, true);
            } else {
                only_keys(j, path, {"p", "E", "H", "x0", "project"});
                vec("p", 4, true), vec("E", 4, false), vec("H", 4, false), vec("x0", 4, false);
            }
            break;
        case Kind::general_n: {
            only_keys(j, path, {"x0", "stack"});
            vec("x0", 4, false);
            if (!j.contains("stack") || !j.at("stack").is_array() || j.at("stack").empty())
                throw ScenarioError("field 'initial.stack' must be a non-empty array of 4-vectors");
            for (std::size_t i = 0; i < j.at("stack").size(); ++i) numbers(j.at("stack")[i], path + ".stack." + std::to_string(i), 4);
            break;
        }
        case Kind::nonrel:
            only_keys(j, path, {"x", "v", "a", "j"});
            vec("x", 3, false), vec("v", 3, true), vec("a", 3, false), vec("j", 3, false);
            break;
        case Kind::verify:
            only_keys(j, path, {});
            break;
    }
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace detail

//---------------------------------------------------------------------------//
// Loading, overrides, validation
//---------------------------------------------------------------------------//

inline json parse_scenario_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t line = detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ScenarioError(origin + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
}

inline json load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path);
}

/*!
 * Apply "dotted.path=value". The value is read as JSON when it parses
 * (numbers, booleans, arrays) and as a string otherwise. Numeric segments
 * index into arrays; missing object members are created and left to
 * validation.
 */
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ScenarioError("override '" + assignment + "' is not of the form path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string seg = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (seg.empty()) throw ScenarioError("override path '" + path + "' has an empty segment");
        json* next = nullptr;
        if (node->is_array()) {
            if (seg.find_first_not_of("0123456789") != std::string::npos) throw ScenarioError("override path '" + path + "': '" + seg + "' is not an array index");
            const auto idx = std::stoul(seg);
            if (idx >= node->size()) throw ScenarioError("override path '" + path + "': index " + seg + " out of range");
            next = &(*node)[idx];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw ScenarioError("override path '" + path + "' descends into a scalar");
            next = &(*node)[seg];
        }
        if (dot == std::string::npos) {
            *next = value;
            return;
        }
        node = next;
        start = dot + 1;
    }
}

/// Validate a parsed document into a Scenario. Model parameters are checked
/// by constructing them, so invalid coefficients fail here.
inline Scenario validate_scenario(const json& doc) {
    using namespace detail;
    only_keys(doc, "", {"name", "kind", "units", "model", "initial", "potential", "integrator", "output", "verify"});

    Scenario s;
    s.name = text(doc, "name", "", std::string("scenario"));
    const std::string kind = text(doc, "kind", "");
    if (kind == "free") s.kind = Kind::free;
    else if (kind == "hamilton") s.kind = Kind::hamilton;
    else if (kind == "general_n") s.kind = Kind::general_n;
    else if (kind == "nonrel") s.kind = Kind::nonrel;
    else if (kind == "verify") s.kind = Kind::verify;
    else throw ScenarioError("field 'kind': unknown kind '" + kind + "' (free, hamilton, general_n, nonrel, verify)");

    if (doc.contains("units")) {
        const auto& u = doc.at("units");
        only_keys(u, "units", {"hbar", "c"});
        s.hbar = number(u, "hbar", "units", 1.0);
        s.c = number(u, "c", "units", 1.0);
    }
    if (doc.contains("model")) {
        const auto& m = doc.at("model");
        only_keys(m, "model", {"mass", "n", "k"});
        s.mass = number(m, "mass", "model", 1.0);
        s.order = integer(m, "n", "model", 1);
        if (m.contains("k")) {
            s.k = numbers(m.at("k"), "model.k", 0);
            if (m.contains("n") && static_cast<std::size_t>(s.order) + 1 != s.k.size())
                throw ScenarioError("model.k has " + std::to_string(s.k.size()) + " entries but model.n = " + std::to_string(s.order));
            s.order = static_cast<int>(s.k.size()) - 1;
        }
    }
    try {
        (void)s.params();
    } catch (const Error& e) {
        throw ScenarioError(std::string("model: ") + e.what());
    }

    s.initial = doc.contains("initial") ? doc.at("initial") : json::object();
    if (s.kind != Kind::verify && !doc.contains("initial")) throw ScenarioError("missing field 'initial'");
    check_initial(s.initial, s.kind);

    if (doc.contains("potential")) {
        if (s.kind != Kind::hamilton && s.kind != Kind::nonrel)
            throw ScenarioError("field 'potential' is only valid for kinds hamilton and nonrel");
        s.potential = parse_potential(doc.at("potential"), "potential", s.kind);
    }

    if (doc.contains("integrator")) {
        const auto& g = doc.at("integrator");
        only_keys(g, "integrator", {"dt", "t_end", "periods", "stride"});
        s.integrator.dt = number(g, "dt", "integrator", 1e-3);
        if (g.contains("t_end") && g.contains("periods")) throw ScenarioError("give either integrator.t_end or integrator.periods, not both");
        s.integrator.tau_end = number(g, "t_end", "integrator", 1.0);
        s.t_end_periods = number(g, "periods", "integrator", 0.0);
        s.integrator.stride = integer(g, "stride", "integrator", 1);
        if (!(s.integrator.dt > 0)) throw ScenarioError("integrator.dt must be positive");
        if (!(s.integrator.tau_end > 0)) throw ScenarioError("integrator.t_end must be positive");
        if (s.t_end_periods < 0) throw ScenarioError("integrator.periods must be positive");
        if (s.integrator.stride < 1) throw ScenarioError("integrator.stride must be at least 1");
    }
    if (s.t_end_periods > 0) {
        const auto params = s.params();
        if (params.order() < 1) throw ScenarioError("integrator.periods needs a model with a Compton frequency");
        s.integrator.tau_end = s.t_end_periods * 2.0 * std::numbers::pi / params.compton_frequency();
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        only_keys(o, "output", {"path", "format", "precision"});
        s.output.path = text(o, "path", "output", std::string());
        s.output.format = text(o, "format", "output", std::string("csv"));
        s.output.precision = integer(o, "precision", "output", 17);
        if (s.output.format != "csv" && s.output.format != "json") throw ScenarioError("output.format must be csv or json");
    }
    if (const char* env = std::getenv("ZITTERKIT_PRECISION"); env && *env) {
        char* end = nullptr;
        const long p = std::strtol(env, &end, 10);
        if (*end != '\0') throw ScenarioError("ZITTERKIT_PRECISION must be an integer");
        s.output.precision = static_cast<int>(p);
    }
    if (s.output.precision < 1 || s.output.precision > 17) throw ScenarioError("output precision must be between 1 and 17");

    if (doc.contains("verify")) {
        const auto& v = doc.at("verify");
        only_keys(v, "verify", {"suite", "seed", "points"});
        s.verify.suite = text(v, "suite", "verify", std::string("all"));
        if (v.contains("seed")) {
            if (!v.at("seed").is_number_unsigned()) throw ScenarioError("field 'verify.seed' must be a non-negative integer");
            s.verify.seed = v.at("seed").get<std::uint64_t>();
        }
        if (v.contains("points")) s.verify.points = integer(v, "points", "verify", 0);
    }
    return s;
}

//---------------------------------------------------------------------------//
// Typed views of the initial block
//---------------------------------------------------------------------------//

inline FourVector four(const json& j, const char* key, FourVector fallback = {}) {
    if (!j.contains(key)) return fallback;
    const auto v = detail::numbers(j.at(key), std::string("initial.") + key, 4);
    return {v[0], v[1], v[2], v[3]};
}

inline ThreeVector three(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    const auto v = detail::numbers(j.at(key), std::string("initial.") + key, 3);
    return {v[0], v[1], v[2]};
}

inline FreeSolution free_solution(const Scenario& s) {
    const auto& j = s.initial;
    const bool project = j.contains("project") && j.at("project").get<bool>();
    return make_free_solution(s.params(), four(j, "p"), four(j, "E"), four(j, "H"), four(j, "x0"), project);
}

inline PhasePoint phase_point(const Scenario& s) {
    const auto& j = s.initial;
    if (j.contains("q")) return {four(j, "x"), four(j, "p"), four(j, "q"), four(j, "pi"), 0.0};
    return phase_point_at(free_solution(s), 0.0);
}

inline ScalarPotential scalar_potential(const PotentialSpec& p) {
    if (p.type == "spatial_harmonic") return ScalarPotential::spatial_harmonic(p.k);
    return ScalarPotential::zero();
}

inline Potential3D potential_3d(const PotentialSpec& p) {
    if (p.type == "harmonic") return Potential3D::harmonic(p.k);
    if (p.type == "gaussian_barrier") return Potential3D::gaussian_barrier(p.height, p.sigma);
    if (p.type == "smoothed_step") return Potential3D::smoothed_step(p.height, p.sigma);
    if (p.type == "uniform") return Potential3D::uniform_force(p.force);
    return Potential3D::zero();
}

inline KinState3D kin_state(const Scenario& s) {
    const auto& j = s.initial;
    return {0.0, three(j, "x"), three(j, "v"), three(j, "a"), three(j, "j")};
}

inline DerivStack deriv_stack(const Scenario& s) {
    DerivStack d;
    const auto& st = s.initial.at("stack");
    for (std::size_t i = 0; i < st.size(); ++i) {
        const auto v = detail::numbers(st[i], "initial.stack." + std::to_string(i), 4);
        d.emplace_back(v[0], v[1], v[2], v[3]);
    }
    return d;
}

//---------------------------------------------------------------------------//
// Schema
//---------------------------------------------------------------------------//

inline const char* scenario_schema() {
    return R"schema({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "zitterkit scenario",
  "type": "object",
  "additionalProperties": false,
  "required": ["kind"],
  "properties": {
    "name": {"type": "string"},
    "kind": {"enum": ["free", "hamilton", "general_n", "nonrel", "verify"]},
    "units": {
      "type": "object", "additionalProperties": false,
      "properties": {"hbar": {"type": "number", "default": 1}, "c": {"type": "number", "default": 1}}
    },
    "model": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "mass": {"type": "number", "default": 1},
        "n": {"type": "integer", "default": 1, "description": "0: Newtonian, 1: physical k1 = -hbar^2/(4 m c^4)"},
        "k": {"type": "array", "items": {"type": "number"}, "description": "explicit k0..kn; k0 = mass, alternating signs"}
      }
    },
    "initial": {
      "description": "kind-specific; 4-vectors are [v0, v1, v2, v3], 3-vectors [x, y, z]",
      "oneOf": [
        {"title": "free, hamilton", "type": "object", "additionalProperties": false, "required": ["p"],
         "properties": {"p": {"$ref": "#/definitions/v4"}, "E": {"$ref": "#/definitions/v4"}, "H": {"$ref": "#/definitions/v4"},
                        "x0": {"$ref": "#/definitions/v4"}, "project": {"type": "boolean"}}},
        {"title": "hamilton (phase point)", "type": "object", "additionalProperties": false, "required": ["p", "q", "pi"],
         "properties": {"x": {"$ref": "#/definitions/v4"}, "p": {"$ref": "#/definitions/v4"}, "q": {"$ref": "#/definitions/v4"},
                        "pi": {"$ref": "#/definitions/v4"}}},
        {"title": "general_n", "type": "object", "additionalProperties": false, "required": ["stack"],
         "properties": {"x0": {"$ref": "#/definitions/v4"},
                        "stack": {"type": "array", "items": {"$ref": "#/definitions/v4"}, "description": "v, dv, ..., d^{2n} v"}}},
        {"title": "nonrel", "type": "object", "additionalProperties": false, "required": ["v"],
         "properties": {"x": {"$ref": "#/definitions/v3"}, "v": {"$ref": "#/definitions/v3"}, "a": {"$ref": "#/definitions/v3"},
                        "j": {"$ref": "#/definitions/v3"}}}
      ]
    },
    "potential": {
      "type": "object", "required": ["type"],
      "description": "hamilton: zero | spatial_harmonic{k}; nonrel: zero | harmonic{k} | gaussian_barrier{height, sigma} | smoothed_step{height, sigma} | uniform{force}",
      "properties": {
        "type": {"enum": ["zero", "spatial_harmonic", "harmonic", "gaussian_barrier", "smoothed_step", "uniform"]},
        "k": {"type": "number"}, "height": {"type": "number"}, "sigma": {"type": "number", "exclusiveMinimum": 0},
        "force": {"$ref": "#/definitions/v3"}
      }
    },
    "integrator": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "dt": {"type": "number", "exclusiveMinimum": 0, "default": 0.001},
        "t_end": {"type": "number", "exclusiveMinimum": 0, "default": 1},
        "periods": {"type": "number", "exclusiveMinimum": 0, "description": "t_end in Compton periods; excludes t_end"},
        "stride": {"type": "integer", "minimum": 1, "default": 1}
      }
    },
    "output": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "path": {"type": "string"},
        "format": {"enum": ["csv", "json"], "default": "csv"},
        "precision": {"type": "integer", "minimum": 1, "maximum": 17, "default": 17,
                      "description": "overridden by ZITTERKIT_PRECISION"}
      }
    },
    "verify": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "suite": {"enum": ["all", "brackets", "dirac", "monitors"], "default": "all"},
        "seed": {"type": "integer", "minimum": 0, "default": 1},
        "points": {"type": "integer", "minimum": 1}
      }
    }
  },
  "definitions": {
    "v4": {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4},
    "v3": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
  }
}
)schema";
}

}  // namespace zitterkit::cli
