#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convpart/analysis.hpp"
#include "convpart/quadrature.hpp"

namespace convpart {

struct ExperimentOutputs {
    std::string results_csv;
    std::string rates_csv;
    std::string partition_json;  // optional: algorithm1 partition at the largest budget
    std::string svg;             // optional: rendering of that partition (d = 2)
    std::string trace_prefix;    // optional: one trace CSV per refined (method, N)
};

/// Full description of one study run; parsed from a JSON config file and/or
/// CLI flags (flags win).
struct ExperimentConfig {
    std::string function_label = "quad";
    int d = 2;
    double p = 2.0;  // infinity encoded as "inf"
    double q = 2.0;
    std::vector<long long> budgets;
    std::vector<std::string> methods = {"algorithm1", "uniform", "adaptive_dyadic"};
    QuadratureConfig quadrature;
    ExperimentOutputs outputs;
    bool record_timing = true;  // off: the seconds column prints 0 (reproducible bytes)
    bool run_lower_bound_check = false;

    void validate() const;
};

ExperimentConfig parse_experiment_config_json(const std::string& json_text);

struct RunRow {
    std::string method;
    long long budget = 0;
    long long cells = 0;
    double error = 0.0;
    double seconds = 0.0;
};

struct ExperimentReport {
    std::vector<RunRow> rows;
    std::string results_csv;
    std::string rates_csv;
    std::vector<std::pair<std::string, RefinementTrace>> traces;  // "<method>_N<budget>"
    std::optional<LowerBoundCheck> lower_bound;
    std::vector<std::string> diagnostics;
    bool ok = true;
};

/// Builds every requested (method, budget) approximant, measures the L_p
/// error, and assembles the CSV artifacts. Tasks run in parallel up to the
/// CONVPART_THREADS cap (0 or unset = hardware concurrency); each task is
/// internally serial, so outputs do not depend on the thread count.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Rate summary (label,method,slope,r2,predicted,regime) from results CSV
/// text. Fit excludes single-cell rows; fewer than three usable points or
/// non-positive errors yield slope=NA.
std::string rates_csv_from_results(const std::string& results_csv_text);

/// Entry point behind the command-line tool (subcommands run, rates,
/// render, audit). Returns the process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace convpart
