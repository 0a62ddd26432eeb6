#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dcmg/config.hpp"
#include "dcmg/report.hpp"

namespace dcmg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSimAborted = 3;

struct RunArtifacts {
    RunResult result;
    std::vector<MetricsRow> metrics;
    std::string timeseries_path;
    std::string metrics_path;
    std::string plot_path;  // empty when no plot was written
};

/// Execute one configured run and write its artifacts under
/// config.output_dir. Does not catch config errors.
RunArtifacts execute_run(const RunConfig& config);

/// Run both controllers on the scenario and write the comparison file.
struct CompareArtifacts {
    RunArtifacts esmc;
    RunArtifacts gitsmbc;
    std::string compare_path;
};
CompareArtifacts execute_compare(const RunConfig& config);

/// One run per value of a sweepable parameter, aggregated in one file.
struct SweepArtifacts {
    std::vector<std::pair<double, std::vector<MetricsRow>>> rows;
    std::vector<RunResult> results;
    std::string sweep_path;
};
SweepArtifacts execute_sweep(const RunConfig& config, const std::string& parameter,
                             const std::vector<double>& values);

bool is_sweepable_parameter(const std::string& name);
RunConfig with_parameter(RunConfig config, const std::string& parameter, double value);

/// CLI entry points; map errors to exit codes and report on the streams.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const std::string& parameter,
              const std::vector<double>& values, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace dcmg
