#include "tsengflow/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace cli = tsengflow::cli;

int main(int argc, char** argv) {
    CLI::App app{"Tikhonov-regularized Tseng dynamics for constrained variational inequalities"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool allow_invalid = false;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_flag("--allow-invalid-schedule", allow_invalid, "continue when schedule validation fails");
        sub->add_option("--seed", seed, "problem generator seed (overrides config)");
    };
    auto* validate = app.add_subcommand("validate", "check the schedule against the convergence hypotheses");
    auto* run = app.add_subcommand("run", "integrate the dynamics and write trajectory.csv and plots");
    auto* oracle = app.add_subcommand("oracle", "least-norm and solution-map checks via the auxiliary oracle");
    auto* sweep = app.add_subcommand("sweep", "evaluate the power-law feasibility region on a (q, r) grid");
    for (auto* sub : {validate, run, oracle, sweep}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kSuccess : cli::kConfigError;
    }

    cli::ExperimentConfig config;
    try {
        if (!config_path.empty()) config = cli::load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (allow_invalid) config.allow_invalid_schedule = true;
        if (seed) cli::override_seed(config, *seed);
    } catch (const cli::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return cli::kConfigError;
    }

    try {
        if (*validate) return cli::cmd_validate(config, std::cout, std::cerr);
        if (*run) return cli::cmd_run(config, std::cout, std::cerr);
        if (*oracle) return cli::cmd_oracle(config, std::cout, std::cerr);
        return cli::cmd_sweep(config, std::cout, std::cerr);
    } catch (const cli::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return cli::kConfigError;
    } catch (const tsengflow::ContractError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    } catch (const tsengflow::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kScheduleInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kConfigError;
    }
}
