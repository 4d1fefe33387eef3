#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace stab::harness {

/// Validated experiment configuration (dotted-key = value text format).
struct ExperimentConfig {
  int meshLevel = 5;
  double glEpsilon = 0.5;
  std::string glAnsatz = "equatorial";  // constant-half|zero|equatorial|modulated|random-low
  double glSolverTol = 1e-10;
  int glSolverMaxIter = 60;
  int glSolverFlowSteps = 4000;
  double glSolverFlowStep = 5e-3;
  int glSpectrumK = 8;
  int ymhDegree = 1;
  double ymhEpsilon = 0.3;
  int pointlabN = 8;
  int pointlabSamples = 100;
  uint64_t seed = 20240u;
  std::string outputDir = "out";

  // echo of the effective key/value pairs, insertion-ordered
  std::map<std::string, std::string> echo() const;
};

/// Defaults when path is empty; otherwise parses and validates the file.
/// Unknown keys are rejected with a nearest-key suggestion; range errors
/// name the offending key; parse errors carry the line number.
/// The STAB_SEED environment variable overrides the configured seed.
ExperimentConfig load_config(const std::string& path);

ExperimentConfig default_config();

}  // namespace stab::harness
