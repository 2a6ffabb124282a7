#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"
#include "preempt/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInvalidModel = 2, kNumericalFailure = 3 };

}  // namespace

int main(int argc, char** argv) {
    using namespace preempt;

    CLI::App app{"Regulated preemption game: values, thresholds, strategies and simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string format_name = "table";
    std::optional<double> y;
    std::optional<double> gamma;
    std::optional<std::uint64_t> seed;
    cli::SweepRequest sweep;

    app.add_option("--config", config_path, "JSON config with model/law/gamma/sim sections")->check(CLI::ExistingFile);
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--gamma", gamma, "Risk aversion, overrides the config");
    app.add_option("--seed", seed, "Simulation seed, overrides the config");

    auto* value = app.add_subcommand("value", "Position values L, F, S and blended payoffs at y");
    value->add_option("--y", y, "Profit level")->required();
    app.add_subcommand("thresholds", "Y_L, Y_1, Y_2, Y_F and the risk-averse thresholds");
    auto* strategy = app.add_subcommand("strategy", "Equilibrium strategy, outcome and payoffs at y");
    strategy->add_option("--y", y, "Profit level")->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "Plot-ready grid of strategies, options or thresholds");
    sweep_cmd->add_option("--quantity", sweep.quantity, "p1p2 | options | thresholds_vs_gamma");
    sweep_cmd->add_option("--grid", sweep.n, "Number of grid points");
    sweep_cmd->add_option("--y-min", sweep.y_min, "Lower end of the y grid");
    sweep_cmd->add_option("--y-max", sweep.y_max, "Upper end of the y grid");
    sweep_cmd->add_option("--gamma-min", sweep.gamma_min, "Lower end of the gamma grid");
    sweep_cmd->add_option("--gamma-max", sweep.gamma_max, "Upper end of the gamma grid");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the equilibrium from y");
    simulate->add_option("--y", y, "Initial profit level")->required();
    app.add_subcommand("regime", "Classification of the regulator's law");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        cli::RunConfig config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
        if (gamma) config.gamma = *gamma;
        if (seed) {
            if (!config.sim) config.sim = cli::SimSection{};
            config.sim->config.seed = *seed;
        }
        const cli::Format format = cli::parse_format(format_name);

        cli::Table table;
        if (*value) {
            table = cli::cmd_value(config, *y);
        } else if (app.got_subcommand("thresholds")) {
            table = cli::cmd_thresholds(config);
        } else if (*strategy) {
            table = cli::cmd_strategy(config, *y);
        } else if (*sweep_cmd) {
            table = cli::cmd_sweep(config, sweep);
        } else if (*simulate) {
            table = cli::cmd_simulate(config, *y);
        } else {
            table = cli::cmd_regime(config);
        }
        for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
        cli::render(table, format, std::cout);
        return kOk;
    } catch (const InvalidModel& e) {
        std::cerr << "invalid model: " << e.what() << '\n';
        return kInvalidModel;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const cli::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    }
}
