#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tentlab/io.hpp"

namespace tentlab {

/// Bad configuration or unreadable input; maps to exit status 2.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

struct ExperimentParams {
    double p = 0.5, q = 2.0, s = 2.0;
    double gamma = 0.5, kappa = 1.0, delta = 1.0 / 16.0, c1 = 0.0;
    DecompMode mode = DecompMode::Strict;
    int M = 1;
    double nu = 4.0;
    double n_exp = 0.0;  // 0: midway between n(s - p)/p and 2M
    double c0 = 1.0;
    double leak_tol = 1e-8;
};

// Sources stay as JSON fragments; they are resolved against base_dir when run.
struct ExperimentConfig {
    Json raw;
    std::filesystem::path base_dir;
    std::optional<std::uint64_t> seed;
    Json space, weight, grid, tent, graph, f;
    ExperimentParams params;
    std::vector<std::string> pipeline;
    std::filesystem::path out_dir;
    std::string report_name = "report.json";
    std::string decomposition_name = "decomposition.json";
    std::vector<std::string> plots;

    /// Validates shape and ranges; throws ConfigError.
    static ExperimentConfig parse(const Json& doc, const std::filesystem::path& base_dir);
};

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 invariant failure
    Json report;
    std::vector<std::string> failures;
};

/// Runs the pipeline and writes every artifact. ConfigError escapes for
/// configuration and input problems; invariant failures are reported in the
/// result with the report already written.
RunResult run_experiment(const ExperimentConfig& config);

/// CSV text (header row, then data) for one series of a report: "area",
/// "levels", "lambda", "calderon", "heat" or "hardy_lambda".
std::string emit_plot_data(const Json& report, const std::string& kind);

/// Kinds emit_plot_data accepts.
const std::vector<std::string>& plot_kinds();

}  // namespace tentlab
