#pragma once

// Command implementations behind the `ffdelay` executable. They never throw:
// every failure becomes an exit code and a message. Artifacts are staged in
// temporary files and renamed into place only when the whole command
// succeeds.

#include "ffdelay/series.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ffdelay {

enum ExitCode : int { kExitSuccess = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

struct CommandOutcome {
    int exit_code = kExitSuccess;
    std::string message;  // summary on success, diagnostic otherwise
    std::vector<std::filesystem::path> artifacts;
};

struct FitArgs {
    std::filesystem::path load;
    std::filesystem::path perf;
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
};

struct PredictArgs {
    std::filesystem::path load;
    std::filesystem::path params;
    Index horizon = 0;
    std::filesystem::path out;
};

struct SimulateArgs {
    std::filesystem::path load;
    std::string variant;
    std::optional<double> tau1, tau2, tau3, tau4, tau5;
    std::optional<Index> horizon;
    std::filesystem::path out;
};

/// Writes params.yaml, predictions.csv, fit_chart.svg, load_chart.svg.
[[nodiscard]] CommandOutcome cmd_fit(const FitArgs& args);
/// Writes predictions.csv and prediction_chart.svg.
[[nodiscard]] CommandOutcome cmd_predict(const PredictArgs& args);
/// Writes trajectory.csv and trajectory_chart.svg.
[[nodiscard]] CommandOutcome cmd_simulate(const SimulateArgs& args);
/// Writes comparison.csv (variant,parameters,sse,r2).
[[nodiscard]] CommandOutcome cmd_compare(const FitArgs& args);

/// Accepts decimal numbers and inf/.inf for time constants.
[[nodiscard]] std::optional<double> parse_tau(const std::string& text);

/// Required --tau flags per variant, for usage text.
[[nodiscard]] std::string simulate_usage();

} // namespace ffdelay
