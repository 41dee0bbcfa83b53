// Command-line front end: analyze | tune | simulate | validate.
// Configs are JSON with all frequencies in Hz; outputs are CSV tables with
// a JSON manifest per run. Exit codes: 0 ok, 2 config error, 3 infeasible
// tuning, 4 validation contract failure, 5 simulation divergence.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resetctl/commands.hpp"

namespace {

resetctl::cli::Overrides::Grid parse_grid(const std::string& text) {
    std::istringstream in(text);
    std::string part;
    std::vector<double> vals;
    while (std::getline(in, part, ',')) {
        vals.push_back(std::stod(part));
    }
    if (vals.size() != 3) {
        throw CLI::ValidationError("--grid expects fmin,fmax,points");
    }
    return {vals[0], vals[1], static_cast<std::size_t>(vals[2])};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reset-controller describing functions, CgLp tuning and "
                 "time-domain validation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", resetctl::cli::kToolVersion);

    std::string config_path;
    std::string out_dir = ".";
    std::string orders_arg;
    std::string grid_arg;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "JSON config file");
        if (config_required) {
            opt->required();
        }
        sub->add_option("--out", out_dir, "output directory (default: .)");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "harmonic sweep to CSV");
    add_common(analyze, true);
    analyze->add_option("--orders", orders_arg, "comma-separated harmonic orders");
    analyze->add_option("--grid", grid_arg, "fmin_hz,fmax_hz,points");

    CLI::App* tune = app.add_subcommand("tune", "CgLp tuning procedure");
    add_common(tune, true);

    CLI::App* simulate = app.add_subcommand("simulate", "closed-loop tracking run");
    add_common(simulate, true);

    CLI::App* validate =
        app.add_subcommand("validate", "analytic vs simulator cross-check");
    add_common(validate, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            resetctl::cli::Overrides overrides;
            if (!orders_arg.empty()) {
                std::istringstream in(orders_arg);
                std::string part;
                std::vector<int> orders;
                while (std::getline(in, part, ',')) {
                    orders.push_back(std::stoi(part));
                }
                overrides.orders = orders;
            }
            if (!grid_arg.empty()) {
                overrides.grid = parse_grid(grid_arg);
            }
            return resetctl::cli::run_analyze(config_path, out_dir, overrides);
        }
        if (tune->parsed()) {
            return resetctl::cli::run_tune(config_path, out_dir);
        }
        if (simulate->parsed()) {
            return resetctl::cli::run_simulate(config_path, out_dir);
        }
        return resetctl::cli::run_validate(config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return resetctl::cli::kConfigError;
    }
}
