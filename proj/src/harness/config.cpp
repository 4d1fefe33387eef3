#include "stab/harness/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "stab/core/util.hpp"

namespace stab::harness {

namespace {

const std::vector<std::string> kKnownKeys = {
    "mesh.level",          "gl.epsilon",         "gl.ansatz",
    "gl.solver.tol",       "gl.solver.maxIter",  "gl.solver.flowSteps",
    "gl.solver.flowStep",  "gl.spectrum.k",      "ymh.degree",
    "ymh.epsilon",         "pointlab.n",         "pointlab.samples",
    "pointlab.seed",       "output.dir"};

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0)});
  return d[a.size()][b.size()];
}

std::string suggest(const std::string& key) {
  int best = 1 << 30;
  std::string hit;
  for (const auto& k : kKnownKeys) {
    const int e = edit_distance(key, k);
    if (e < best) {
      best = e;
      hit = k;
    }
  }
  return hit;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    require(pos == v.size(), "");
    return x;
  } catch (...) {
    fail("config line " + std::to_string(line) + ": cannot parse value for " + key);
  }
}

long long parse_int(const std::string& key, const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    require(pos == v.size(), "");
    return x;
  } catch (...) {
    fail("config line " + std::to_string(line) + ": cannot parse value for " + key);
  }
}

void validate(const ExperimentConfig& c) {
  require(c.meshLevel >= 0 && c.meshLevel <= 8, "config: mesh.level must be in [0, 8]");
  require(c.glEpsilon > 0.0, "config: gl.epsilon must be positive");
  require(c.glAnsatz == "constant-half" || c.glAnsatz == "zero" || c.glAnsatz == "equatorial" ||
              c.glAnsatz == "modulated" || c.glAnsatz == "random-low",
          "config: gl.ansatz must be one of constant-half|zero|equatorial|modulated|random-low");
  require(c.glSolverTol > 0.0, "config: gl.solver.tol must be positive");
  require(c.glSolverMaxIter > 0, "config: gl.solver.maxIter must be positive");
  require(c.glSolverFlowSteps >= 0, "config: gl.solver.flowSteps must be nonnegative");
  require(c.glSolverFlowStep > 0.0, "config: gl.solver.flowStep must be positive");
  require(c.glSpectrumK >= 1, "config: gl.spectrum.k must be at least 1");
  require(c.ymhEpsilon > 0.0, "config: ymh.epsilon must be positive");
  require(c.pointlabN >= 1 && c.pointlabN <= 8, "config: pointlab.n must be in [1, 8]");
  require(c.pointlabSamples >= 1, "config: pointlab.samples must be positive");
  require(!c.outputDir.empty(), "config: output.dir must not be empty");
}

void apply_env_seed(ExperimentConfig& c) {
  if (const char* env = std::getenv("STAB_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (...) {
      fail("STAB_SEED is not an unsigned integer");
    }
  }
}

}  // namespace

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> m;
  auto fmt = [](double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  };
  m["mesh.level"] = std::to_string(meshLevel);
  m["gl.epsilon"] = fmt(glEpsilon);
  m["gl.ansatz"] = glAnsatz;
  m["gl.solver.tol"] = fmt(glSolverTol);
  m["gl.solver.maxIter"] = std::to_string(glSolverMaxIter);
  m["gl.solver.flowSteps"] = std::to_string(glSolverFlowSteps);
  m["gl.solver.flowStep"] = fmt(glSolverFlowStep);
  m["gl.spectrum.k"] = std::to_string(glSpectrumK);
  m["ymh.degree"] = std::to_string(ymhDegree);
  m["ymh.epsilon"] = fmt(ymhEpsilon);
  m["pointlab.n"] = std::to_string(pointlabN);
  m["pointlab.samples"] = std::to_string(pointlabSamples);
  m["pointlab.seed"] = std::to_string(seed);
  m["output.dir"] = outputDir;
  return m;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  apply_env_seed(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c;
  if (path.empty()) {
    apply_env_seed(c);
    return c;
  }
  std::ifstream in(path);
  require(in.good(), "config: file does not exist: " + path);
  std::string lineText;
  int line = 0;
  while (std::getline(in, lineText)) {
    ++line;
    const auto hash = lineText.find('#');
    if (hash != std::string::npos) lineText = lineText.substr(0, hash);
    const std::string t = trim(lineText);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    require(!val.empty(), "config line " + std::to_string(line) + ": empty value for " + key);

    if (key == "mesh.level") c.meshLevel = static_cast<int>(parse_int(key, val, line));
    else if (key == "gl.epsilon") c.glEpsilon = parse_double(key, val, line);
    else if (key == "gl.ansatz") c.glAnsatz = val;
    else if (key == "gl.solver.tol") c.glSolverTol = parse_double(key, val, line);
    else if (key == "gl.solver.maxIter") c.glSolverMaxIter = static_cast<int>(parse_int(key, val, line));
    else if (key == "gl.solver.flowSteps") c.glSolverFlowSteps = static_cast<int>(parse_int(key, val, line));
    else if (key == "gl.solver.flowStep") c.glSolverFlowStep = parse_double(key, val, line);
    else if (key == "gl.spectrum.k") c.glSpectrumK = static_cast<int>(parse_int(key, val, line));
    else if (key == "ymh.degree") c.ymhDegree = static_cast<int>(parse_int(key, val, line));
    else if (key == "ymh.epsilon") c.ymhEpsilon = parse_double(key, val, line);
    else if (key == "pointlab.n") c.pointlabN = static_cast<int>(parse_int(key, val, line));
    else if (key == "pointlab.samples") c.pointlabSamples = static_cast<int>(parse_int(key, val, line));
    else if (key == "pointlab.seed") c.seed = static_cast<uint64_t>(parse_int(key, val, line));
    else if (key == "output.dir") c.outputDir = val;
    else
      fail("config line " + std::to_string(line) + ": unknown key \"" + key +
           "\" (did you mean \"" + suggest(key) + "\"?)");
  }
  apply_env_seed(c);
  validate(c);
  return c;
}

}  // namespace stab::harness
