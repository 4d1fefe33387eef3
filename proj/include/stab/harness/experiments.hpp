#pragma once

#include <string>
#include <vector>

#include "stab/harness/config.hpp"
#include "stab/harness/report.hpp"

namespace stab::harness {

/// Closed list of runnable experiment pipelines.
std::vector<std::string> experiment_names();

/// Runs one named pipeline, writes the report (and artifacts) under
/// config.outputDir and returns the document. Module failures surface as
/// failing metrics, not exceptions.
ReportDoc run_experiment(const ExperimentConfig& config, const std::string& which);

/// Runs a per-level experiment ("prop21", "fem-lambda1", "bogomolny") on
/// ascending levels, fits the observed order from successive errors and
/// writes a CSV of per-level values.
ReportDoc convergence_study(const ExperimentConfig& config, const std::string& experiment,
                            const std::vector<int>& levels);

}  // namespace stab::harness
