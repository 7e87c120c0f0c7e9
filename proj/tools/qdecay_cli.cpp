// qdecay_cli.cpp: Command-line front end: simulate, kernel, tcl-rates, verify, compare

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdecay/scenario.hpp"

namespace sc = qdecay::scenario;

namespace {

enum ExitCode { ok = 0, verify_failed = 1, config_error = 2, numeric_failure = 3 };

struct Options {
    std::string config_path;
    std::string preset;
    std::string out;
    std::optional<double> step;
    std::optional<double> t_end;
};

void add_common(CLI::App* cmd, Options& opts)
{
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("--config", opts.config_path, "Scenario config file (JSON)");
    cmd->add_option("--preset", opts.preset, "Named preset: lorentzian-weak, lorentzian-strong, lorentzian-verystrong");
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--h", opts.step, "Time step (overrides the config)");
    cmd->add_option("--t-end", opts.t_end, "Final time (overrides the config)");
}

sc::ScenarioConfig load(const Options& opts)
{
    sc::Overrides overrides{opts.step, opts.t_end, std::nullopt};
    if (!opts.out.empty()) overrides.output_dir = opts.out;
    std::optional<std::string> base;
    if (!opts.preset.empty()) base = opts.preset;

    if (opts.config_path.empty()) {
        if (!base) throw sc::ConfigError("either --config or --preset is required", 0);
        return sc::load_preset(*base, overrides);
    }
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) throw sc::ConfigError("cannot read " + opts.config_path, 0);
    std::ostringstream text;
    text << in.rdbuf();
    return sc::load_config(text.str(), base, overrides);
}

void keep_only(sc::ScenarioConfig& config, std::initializer_list<sc::Method> allowed)
{
    std::vector<sc::Method> kept{sc::Method::exact};
    for (sc::Method m : config.methods) {
        if (m != sc::Method::exact && std::find(allowed.begin(), allowed.end(), m) != allowed.end()) kept.push_back(m);
    }
    config.methods = std::move(kept);
}

int run_verify(const sc::ScenarioConfig& config)
{
    const sc::VerifyOutcome outcome = sc::verify(config);
    for (const auto& c : outcome.checks) {
        std::printf("%-28s %s  value=%.3e  tol=%.1e  (%s)\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.value,
                    c.tolerance, c.detail.c_str());
    }
    if (outcome.passed()) return ok;
    std::string failed;
    for (const auto& c : outcome.checks) {
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    std::fprintf(stderr, "verify failed: %s\n", failed.c_str());
    return verify_failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and approximate reduced dynamics of a decaying two-level system"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");

    Options opts;
    auto* simulate = app.add_subcommand("simulate", "Run every requested method and write all data files");
    auto* kernel = app.add_subcommand("kernel", "Write the exact memory kernel to kernel.csv");
    auto* rates = app.add_subcommand("tcl-rates", "Write the time-local decay rate and Lamb shift to tcl_rates.csv");
    auto* verify = app.add_subcommand("verify", "Check the structural identities; exit 1 on any failure");
    auto* compare = app.add_subcommand("compare", "Run two or more methods and write report.json only");
    for (auto* cmd : {simulate, kernel, rates, verify, compare}) add_common(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        sc::ScenarioConfig config = load(opts);
        if (*verify) return run_verify(config);

        int selection = static_cast<int>(sc::Output::all);
        if (*kernel) {
            keep_only(config, {});
            selection = static_cast<int>(sc::Output::kernel);
        } else if (*rates) {
            keep_only(config, {sc::Method::tcl_order2, sc::Method::tcl_order4});
            selection = static_cast<int>(sc::Output::rates);
        } else if (*compare) {
            if (config.methods.size() < 2) throw sc::ConfigError("compare needs at least two methods", 0);
            selection = static_cast<int>(sc::Output::report);
        }

        const sc::ScenarioResult result = sc::run_scenario(config);
        sc::write_outputs(config, result, selection);
        for (const auto& w : result.report.at("warnings")) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
        std::printf("wrote %s\n", config.output_dir.string().c_str());
        return ok;
    } catch (const sc::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return config_error;
    } catch (const sc::MethodFailure& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return numeric_failure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return numeric_failure;
    }
}
