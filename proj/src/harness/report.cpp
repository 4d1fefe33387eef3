#include "stab/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "stab/core/util.hpp"

namespace stab::harness {

Metric& ReportDoc::add(const std::string& name, double value, double target, double tolerance,
                       const std::string& kind) {
  Metric m;
  m.value = value;
  m.target = target;
  m.tolerance = tolerance;
  m.kind = kind;
  if (kind == "abs-diff")
    m.pass = std::isfinite(value) && std::abs(value - target) <= tolerance;
  else if (kind == "le")
    m.pass = std::isfinite(value) && value <= target + tolerance;
  else if (kind == "ge")
    m.pass = std::isfinite(value) && value >= target - tolerance;
  else
    fail("ReportDoc: unknown metric kind " + kind);
  metrics.emplace_back(name, m);
  return metrics.back().second;
}

bool ReportDoc::all_pass() const {
  for (const auto& [name, m] : metrics)
    if (!m.pass) return false;
  return true;
}

std::string ReportDoc::to_json() const {
  nlohmann::ordered_json j;
  j["schemaVersion"] = schemaVersion;
  j["experimentId"] = experimentId;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : configEcho) cfg[k] = v;
  j["configEcho"] = cfg;
  nlohmann::ordered_json ms;
  for (const auto& [name, m] : metrics) {
    nlohmann::ordered_json jm;
    jm["value"] = m.value;
    jm["target"] = m.target;
    jm["tolerance"] = m.tolerance;
    jm["kind"] = m.kind;
    jm["pass"] = m.pass;
    ms[name] = jm;
  }
  j["metrics"] = ms;
  j["artifacts"] = artifacts;
  nlohmann::ordered_json tm;
  for (const auto& [k, v] : timing) tm[k] = v;
  j["timing"] = tm;
  return j.dump(2) + "\n";
}

std::string write_report(const ReportDoc& doc, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string finalPath = (fs::path(dir) / (doc.experimentId + ".report.json")).string();
  const std::string tmpPath = finalPath + ".tmp";
  {
    std::ofstream out(tmpPath, std::ios::trunc);
    require(out.good(), "write_report: cannot open " + tmpPath);
    out << doc.to_json();
    require(out.good(), "write_report: write failed for " + tmpPath);
  }
  fs::rename(tmpPath, finalPath);
  return finalPath;
}

}  // namespace stab::harness
