#pragma once

#include <optional>
#include <string>
#include <vector>

namespace resetctl::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by the command functions and the binary.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kInfeasible = 3,
    kValidationFailure = 4,
    kDivergence = 5,
};

/// Command-line overrides applied on top of the config file.
struct Overrides {
    std::optional<std::vector<int>> orders;
    struct Grid {
        double fmin_hz;
        double fmax_hz;
        std::size_t points;
    };
    std::optional<Grid> grid;
};

/// Harmonic sweep of an element or chain to CSV (plus manifest).
int run_analyze(const std::string& config_path, const std::string& out_dir,
                const Overrides& overrides = {});

/// CgLp tuning procedure; writes the candidate table and best design.
int run_tune(const std::string& config_path, const std::string& out_dir);

/// Closed-loop tracking experiment on the identified stage plant.
int run_simulate(const std::string& config_path, const std::string& out_dir);

/**
 * Built-in analytic-vs-simulated cross-check over the standard element
 * grid: 2% magnitude / 2 deg phase wherever |G_n| > 1e-8, even orders
 * below 1e-6. Config path may be empty; it can supply a Theta_D
 * perturbation hook used by the mutation tests.
 */
int run_validate(const std::string& config_path, const std::string& out_dir);

} // namespace resetctl::cli
