// zitterkit: run scenarios, verify identity suites, print the scenario schema.
//
// Exit codes
//   run:    0 ok, 2 invalid scenario, 3 integration diverged
//   verify: 0 all within tolerance, 1 tolerance breach, 2 invalid input

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zitterkit/cli/run.hpp"
#include "zitterkit/cli/scenario.hpp"
#include "zitterkit/cli/verify.hpp"

namespace zk = zitterkit;
namespace cli = zitterkit::cli;

namespace {

cli::Scenario load(const std::string& path, const std::vector<std::string>& sets) {
    auto doc = cli::load_scenario_file(path);
    for (const auto& s : sets) cli::apply_override(doc, s);
    return cli::validate_scenario(doc);
}

int do_run(const std::string& path, const std::vector<std::string>& sets, const std::string& out_override,
           const std::string& format_override, bool quiet) {
    cli::Scenario s;
    cli::RunResult result;
    try {
        s = load(path, sets);
        if (!format_override.empty()) {
            if (format_override != "csv" && format_override != "json") throw cli::ScenarioError("--format must be csv or json");
            s.output.format = format_override;
        }
        if (s.kind == cli::Kind::verify) throw cli::ScenarioError("kind 'verify' scenarios are run with `zitterkit verify`");
        result = cli::run_scenario(s);
    } catch (const zk::IntegrationDiverged& e) {
        std::cerr << "error: " << e.what() << " (last good time " << e.last_good_time() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    std::string out = out_override.empty() ? s.output.path : out_override;
    if (out.empty()) out = std::filesystem::path(path).stem().string() + "." + s.output.format;
    std::ofstream file(out, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot write '" << out << "'\n";
        return 2;
    }
    if (s.output.format == "json")
        cli::write_json(file, result.table, result.summary);
    else
        cli::write_csv(file, result.table, s.output.precision);
    file.close();

    if (!quiet) {
        cli::print_summary(std::cout, result.summary);
        std::cout << "output: " << out << " (" << s.output.format << ", " << result.table.rows.size() << " rows)\n";
    }
    return 0;
}

int do_verify(const std::string& path, const std::vector<std::string>& sets, const std::string& suite,
              std::optional<std::uint64_t> seed, std::optional<int> points) {
    try {
        std::optional<cli::Scenario> s;
        if (!path.empty()) s = load(path, sets);
        else if (!sets.empty()) throw cli::ScenarioError("--set needs a scenario file");

        cli::VerifyOptions opt;
        if (s) {
            opt.suite = s->verify.suite;
            opt.seed = s->verify.seed;
            opt.points = s->verify.points;
        }
        if (!suite.empty()) opt.suite = suite;
        if (seed) opt.seed = *seed;
        if (points) opt.points = points;

        const auto report = cli::run_verify(opt, s ? &*s : nullptr);
        cli::print_verify(std::cout, report);
        return report.ok() ? 0 : 1;
    } catch (const zk::IntegrationDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zitterkit: classical Zitterbewegung dynamics and identity checks"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario file and write its trajectory");
    std::string run_path, out_path, format;
    std::vector<std::string> run_sets;
    bool quiet = false;
    run->add_option("scenario", run_path, "scenario JSON file")->required();
    run->add_option("--set", run_sets, "override a field: dotted.path=value (repeatable)");
    run->add_option("-o,--output", out_path, "output file (default: output.path or <scenario>.<format>)");
    run->add_option("--format", format, "csv or json");
    run->add_flag("-q,--quiet", quiet, "do not print the summary");

    auto* verify = app.add_subcommand("verify", "run the residual suites");
    std::string verify_path, suite;
    std::vector<std::string> verify_sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    verify->add_option("scenario", verify_path, "optional scenario file supplying the model");
    verify->add_option("--set", verify_sets, "override a scenario field (repeatable)");
    verify->add_option("--suite", suite, "all, brackets, dirac or monitors");
    verify->add_option("--seed", seed, "random seed (default 1)");
    verify->add_option("--points", points, "random points per suite");

    app.add_subcommand("schema", "print the scenario JSON schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand("schema")) {
        std::cout << cli::scenario_schema();
        return 0;
    }
    if (app.got_subcommand(run)) return do_run(run_path, run_sets, out_path, format, quiet);
    return do_verify(verify_path, verify_sets, suite, seed, points);
}
