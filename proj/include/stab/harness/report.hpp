#pragma once

#include <map>
#include <string>
#include <vector>

namespace stab::harness {

/// One bounded check: abs-diff (|value - target| <= tolerance),
/// le (value <= target + tolerance) or ge (value >= target - tolerance).
struct Metric {
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string kind = "abs-diff";
  bool pass = false;
};

struct ReportDoc {
  int schemaVersion = 1;
  std::string experimentId;
  std::map<std::string, std::string> configEcho;
  std::vector<std::pair<std::string, Metric>> metrics;  // insertion-ordered
  std::vector<std::string> artifacts;
  std::map<std::string, long long> timing;  // deterministic effort counters

  Metric& add(const std::string& name, double value, double target, double tolerance,
              const std::string& kind = "abs-diff");
  bool all_pass() const;
  std::string to_json() const;  // byte-stable for identical inputs
};

/// Atomic write (temp file + rename) of report.json under dir; creates the
/// directory if missing; returns the final path.
std::string write_report(const ReportDoc& doc, const std::string& dir);

}  // namespace stab::harness
