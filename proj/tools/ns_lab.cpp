// ns-lab: command-line front end for the simulation library.

#include "nslab/checks.hpp"
#include "nslab/config.hpp"
#include "nslab/errors.hpp"
#include "nslab/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

int report_error(const nslab::Error& e) {
    std::cerr << "ns-lab: error (" << nslab::to_string(e.kind()) << "): " << e.what() << "\n";
    return nslab::exit_code_for(e.kind());
}

int cmd_simulate(const std::string& config, const std::string& out) {
    const nslab::SimConfig cfg = nslab::load_config(config);
    const nslab::RunOutcome outcome = nslab::run(cfg);
    nslab::export_outputs(cfg, outcome, out);
    for (const std::string& note : outcome.notes) std::cerr << "note: " << note << "\n";
    return 0;
}

int cmd_check(const std::string& suite, const std::string& config) {
    std::vector<nslab::SuiteResult> results;
    if (!config.empty()) {
        const nslab::SimConfig cfg = nslab::load_config(config);
        results.push_back(nslab::check_config(cfg));
    }
    if (config.empty() || suite != "config") {
        for (auto& r : nslab::run_suites(suite)) results.push_back(std::move(r));
    }

    bool ok = true;
    for (const nslab::SuiteResult& r : results) {
        std::cout << "suite " << r.suite << "\n";
        for (const nslab::CheckLine& line : r.lines) std::cout << "  " << nslab::format_line(line) << "\n";
        ok = ok && r.passed();
    }
    std::cout << (ok ? "all checks passed" : "check failures detected") << std::endl;
    return ok ? 0 : 2;
}

int cmd_nu(const std::string& config) {
    std::cout << nslab::nu_table(nslab::load_config(config));
    return 0;
}

int cmd_derive_force(const std::string& config, const std::string& grid) {
    const nslab::SimConfig cfg = nslab::load_config(config);
    std::cout << nslab::force_table(cfg, nslab::parse_state_grid(grid, cfg.dim));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave-front and normal-shift dynamics on Riemannian charts"};
    app.set_version_flag("--version", std::string(nslab::kToolName) + " " + nslab::kToolVersion);
    app.require_subcommand(1);

    std::string config, out, suite = "all", grid;

    auto* simulate = app.add_subcommand("simulate", "Shift a front and write fronts, trajectories and a report");
    simulate->add_option("--config", config, "JSON configuration file")->required();
    simulate->add_option("--out", out, "Output directory")->required();

    auto* check = app.add_subcommand("check", "Run invariant suites; exits nonzero on any violation");
    check->add_option("--suite", suite, "Suite name or 'all'")->required();
    check->add_option("--config", config, "Also check a configured run");

    auto* nu = app.add_subcommand("nu", "Report the solved front factor nu per sample");
    nu->add_option("--config", config, "JSON configuration file")->required();

    auto* force = app.add_subcommand("derive-force", "Tabulate force fields on a state grid");
    force->add_option("--config", config, "JSON configuration file")->required();
    force->add_option("--grid", grid, "Axes as x1=lo:hi:N,...,u1=lo:hi:N,...")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*simulate) return cmd_simulate(config, out);
        if (*check) return cmd_check(suite, config);
        if (*nu) return cmd_nu(config);
        if (*force) return cmd_derive_force(config, grid);
    } catch (const nslab::Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "ns-lab: error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
