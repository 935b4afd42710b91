#pragma once

#include <string>
#include <vector>

#include "hypac/config.hpp"
#include "hypac/error.hpp"
#include "hypac/geometry.hpp"

namespace hypac {

enum ExitCode : int {
    ExitSuccess = 0,
    ExitValidation = 2,
    ExitNonConvergence = 3,
    ExitCertificate = 4,
};

/// Maps a library error onto the stable exit-code contract.
int exit_code_for(const Error& e);

/// Machine-readable description of a failure.
nlohmann::json failure_report(const Error& e);

struct RunResult {
    int exit_code = ExitSuccess;
    nlohmann::json summary;            // also written as <command>.json
    std::vector<std::string> outputs;  // files written, relative to output_dir
};

/// Every run goes through this: writes outputs, the failure report if any,
/// and manifest.json. Errors are caught and turned into exit codes.
RunResult run_command(const std::string& command, const ExperimentConfig& cfg);

// The individual studies. Each writes under cfg.output_dir and may throw.
RunResult run_validate(const ExperimentConfig& cfg);
RunResult run_profile_study(const ExperimentConfig& cfg);
RunResult run_spectrum(const ExperimentConfig& cfg);
RunResult run_glue(const ExperimentConfig& cfg);
RunResult run_solve(const ExperimentConfig& cfg);
RunResult run_sweep(const ExperimentConfig& cfg);
RunResult run_supersolution(const ExperimentConfig& cfg);

/// Two geodesics symmetric about the origin on the real axis, at gap D.
std::vector<Geodesic> sweep_template(double D);

/// Least-squares slope of log(values) against xs.
double log_linear_slope(const std::vector<double>& xs, const std::vector<double>& values);

/// 17 significant digits, enough to round-trip.
std::string format_double(double v);

struct RegressionBaseline {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;  // absolute
    std::string provenance;  // which oracle produced the value
};

const std::vector<RegressionBaseline>& regression_baselines();
const RegressionBaseline& baseline(const std::string& name);

}  // namespace hypac
