#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "zitterkit/cli/run.hpp"
#include "zitterkit/cli/scenario.hpp"
#include "zitterkit/cli/verify.hpp"
#include "zitterkit/rng.hpp"

using namespace zitterkit;
using namespace zitterkit::cli;

namespace {

json free_doc() {
    return json::parse(R"({
      "kind": "free",
      "model": {"mass": 1},
      "initial": {"p": [1, 0, 0, 0], "E": [0, 0.1, 0, 0], "H": [0, 0, 0.1, 0]},
      "integrator": {"dt": 0.01, "t_end": 1.0}
    })");
}

std::string error_of(const json& doc) {
    try {
        validate_scenario(doc);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Rng, SplitMixReferenceSequence) {
    SplitMix64 a(0);
    EXPECT_EQ(a.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(a.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(a.next(), 0x06c45d188009454fULL);
    SplitMix64 b(7);
    EXPECT_EQ(b.next(), 0x63cbe1e459320dd7ULL);
    SplitMix64 c(7);
    const double u = c.uniform();
    EXPECT_EQ(u, static_cast<double>(0x63cbe1e459320dd7ULL >> 11) / 9007199254740992.0);
}

TEST(Scenario, ValidatesDefaults) {
    const auto s = validate_scenario(free_doc());
    EXPECT_EQ(s.kind, Kind::free);
    EXPECT_EQ(s.output.format, "csv");
    EXPECT_EQ(s.output.precision, 17);
    EXPECT_EQ(s.integrator.stride, 1);
    EXPECT_DOUBLE_EQ(s.params().k1(), -0.25);
}

TEST(Scenario, RejectsUnknownKeysWithPath) {
    auto doc = free_doc();
    doc["initial"]["bogus"] = 1;
    EXPECT_NE(error_of(doc).find("initial.bogus"), std::string::npos);
    doc = free_doc();
    doc["extra"] = true;
    EXPECT_NE(error_of(doc).find("'extra'"), std::string::npos);
    doc = free_doc();
    doc["integrator"]["dtt"] = 1;
    EXPECT_NE(error_of(doc).find("integrator.dtt"), std::string::npos);
}

TEST(Scenario, FieldErrors) {
    auto doc = free_doc();
    doc["initial"]["p"] = {1, 0, 0};
    EXPECT_NE(error_of(doc).find("initial.p"), std::string::npos);
    doc = free_doc();
    doc["kind"] = "quantum";
    EXPECT_NE(error_of(doc).find("kind"), std::string::npos);
    doc = free_doc();
    doc["model"]["k"] = {1, 0.25};
    EXPECT_NE(error_of(doc).find("alternating"), std::string::npos);
    doc = free_doc();
    doc["integrator"]["dt"] = -1;
    EXPECT_FALSE(error_of(doc).empty());
    doc = free_doc();
    doc["output"] = {{"format", "xml"}};
    EXPECT_FALSE(error_of(doc).empty());
    doc = free_doc();
    doc["potential"] = {{"type", "zero"}};
    EXPECT_FALSE(error_of(doc).empty());  // free runs take no potential
}

TEST(Scenario, ParseErrorReportsLine) {
    try {
        parse_scenario_text("{\n  \"kind\": \"free\",\n  \"model\": {,}\n}\n", "s.json");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("s.json:3"), std::string::npos) << e.what();
    }
}

TEST(Scenario, Overrides) {
    auto doc = free_doc();
    apply_override(doc, "integrator.dt=1e-2");
    apply_override(doc, "initial.E.1=0.2");
    apply_override(doc, "output.format=json");
    apply_override(doc, "name=abc");
    const auto s = validate_scenario(doc);
    EXPECT_EQ(s.integrator.dt, 1e-2);
    EXPECT_EQ(s.initial["E"][1].get<double>(), 0.2);
    EXPECT_EQ(s.output.format, "json");
    EXPECT_EQ(s.name, "abc");

    EXPECT_THROW(apply_override(doc, "noequals"), ScenarioError);
    EXPECT_THROW(apply_override(doc, "initial.E.9=1"), ScenarioError);
    EXPECT_THROW(apply_override(doc, "integrator.dt.x=1"), ScenarioError);
    apply_override(doc, "initial.bogus=1");
    EXPECT_THROW(validate_scenario(doc), ScenarioError);
}

TEST(Scenario, PeriodsAndPrecisionEnv) {
    auto doc = free_doc();
    doc["integrator"] = {{"dt", 0.01}, {"periods", 2}};
    EXPECT_NEAR(validate_scenario(doc).integrator.tau_end, 2 * std::numbers::pi, 1e-15);

    ::setenv("ZITTERKIT_PRECISION", "6", 1);
    EXPECT_EQ(validate_scenario(free_doc()).output.precision, 6);
    ::setenv("ZITTERKIT_PRECISION", "40", 1);
    EXPECT_THROW(validate_scenario(free_doc()), ScenarioError);
    ::unsetenv("ZITTERKIT_PRECISION");
}

TEST(Run, CsvLayout) {
    const auto r = run_scenario(validate_scenario(free_doc()));
    const std::vector<std::string> expected = {"tau", "x0", "x1", "x2", "x3", "v0", "v1", "v2", "v3", "a0", "a1",
                                               "a2",  "a3", "H",  "s1", "s2", "s3", "res_zbw", "res_pv"};
    EXPECT_EQ(r.table.columns, expected);
    EXPECT_EQ(r.table.rows.size(), 101u);
    std::ostringstream out;
    write_csv(out, r.table, 17);
    const std::string csv = out.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "tau,x0,x1,x2,x3,v0,v1,v2,v3,a0,a1,a2,a3,H,s1,s2,s3,res_zbw,res_pv");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    // first data row: tau = 0, v = (1, 0.1, 0, 0), H = 0.51
    const std::string row = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n') - 1);
    EXPECT_EQ(row.substr(0, 20), "0,0,0,0,0,1,0.100000");
    EXPECT_EQ(format_number(0.51, 17), "0.51000000000000001");
    EXPECT_EQ(format_number(0.51, 6), "0.51");
}

TEST(Run, Deterministic) {
    const auto s = validate_scenario(free_doc());
    std::ostringstream a, b;
    write_csv(a, run_scenario(s).table, 17);
    write_csv(b, run_scenario(s).table, 17);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Run, JsonRoundTrip) {
    const auto r = run_scenario(validate_scenario(free_doc()));
    std::ostringstream out;
    write_json(out, r.table, r.summary);
    const auto back = json::parse(out.str());
    ASSERT_EQ(back["rows"].size(), r.table.rows.size());
    for (std::size_t i = 0; i < r.table.rows.size(); ++i)
        for (std::size_t k = 0; k < r.table.rows[i].size(); ++k) ASSERT_EQ(back["rows"][i][k].get<double>(), r.table.rows[i][k]);

    // CSV at 17 digits also re-reads exactly
    std::ostringstream csv;
    write_csv(csv, r.table, 17);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    std::istringstream fields(line);
    std::string f;
    for (std::size_t k = 0; std::getline(fields, f, ','); ++k) EXPECT_EQ(std::strtod(f.c_str(), nullptr), r.table.rows[1][k]);
}

TEST(Run, NonrelAndGeneral) {
    auto doc = json::parse(R"({
      "kind": "nonrel",
      "initial": {"v": [0.1, 0, 0], "a": [0, 0.2, 0], "j": [-0.4, 0, 0]},
      "integrator": {"dt": 0.01, "t_end": 1.0}
    })");
    const auto r = run_scenario(validate_scenario(doc));
    EXPECT_EQ(r.table.columns.back(), "E_total");
    EXPECT_EQ(r.table.columns.size(), 18u);
    EXPECT_NEAR(r.table.rows.front().back(), -0.01, 1e-16);
    EXPECT_EQ(r.summary["barrier_intervals"].get<std::size_t>(), 1u);

    doc = json::parse(R"({
      "kind": "general_n",
      "model": {"mass": 1, "k": [1, -1.25, 0.25]},
      "initial": {"stack": [[1, 0.1, 0, 0], [0, 0, 0, 0], [0, -0.1, 0, 0], [0, 0, 0, 0], [0, 0.1, 0, 0]]},
      "integrator": {"dt": 0.001, "t_end": 30, "stride": 50}
    })");
    const auto g = run_scenario(validate_scenario(doc));
    EXPECT_EQ(g.summary["frequencies"]["characteristic"].size(), 2u);

    doc["kind"] = "verify";
    doc.erase("initial");
    EXPECT_THROW(run_scenario(validate_scenario(doc)), ScenarioError);
}

TEST(Verify, SuitesAndSelection) {
    VerifyOptions opt;
    opt.suite = "brackets";
    opt.points = 10;
    auto rep = run_verify(opt);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.checks.size(), 5u);
    EXPECT_EQ(rep.find("dirac", "clifford"), nullptr);

    opt.suite = "dirac";
    rep = run_verify(opt);
    EXPECT_TRUE(rep.ok());
    ASSERT_NE(rep.find("dirac", "clifford"), nullptr);

    opt.suite = "nope";
    EXPECT_THROW(run_verify(opt), ScenarioError);

    // same seed, same report
    opt.suite = "brackets";
    opt.seed = 99;
    const auto a = run_verify(opt), b = run_verify(opt);
    for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].max, b.checks[i].max);

    std::ostringstream out;
    print_verify(out, a);
    EXPECT_NE(out.str().find("seed: 99"), std::string::npos);
    EXPECT_NE(out.str().find("coherence"), std::string::npos);
}

TEST(Verify, BreachIsReported) {
    VerifyReport rep;
    rep.checks.push_back({"brackets", "{H,p}", 2e-9, 1e-9, 17});
    EXPECT_FALSE(rep.ok());
    std::ostringstream out;
    print_verify(out, rep);
    EXPECT_NE(out.str().find("FAIL (point 17)"), std::string::npos);
    Check nan_check{"x", "y", std::nan(""), 1.0};
    EXPECT_FALSE(nan_check.ok());
}
