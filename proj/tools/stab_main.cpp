// stab: command-line driver for the mesh builder, the GL and YMH pipelines,
// the pointwise identity checks, and the convergence studies.
//
// Exit codes: 0 all metrics pass, 1 metric failure, 2 usage/config error.

#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stab/geometry/fem.hpp"
#include "stab/geometry/mesh.hpp"
#include "stab/harness/config.hpp"
#include "stab/harness/experiments.hpp"
#include "stab/harness/report.hpp"

namespace {

int finish(const stab::harness::ReportDoc& doc) {
  for (const auto& [name, m] : doc.metrics)
    std::cout << (m.pass ? "[PASS] " : "[FAIL] ") << name << " value=" << m.value
              << " target=" << m.target << " tol=" << m.tolerance << " (" << m.kind << ")\n";
  return doc.all_pass() ? 0 : 1;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stab: desk-scale laboratory for Ginzburg-Landau and abelian "
               "Yang-Mills-Higgs stability on the sphere"};
  app.require_subcommand(1);

  // mesh
  auto* meshCmd = app.add_subcommand("mesh", "build an icosphere and write it as OFF");
  int meshLevel = 4;
  std::string meshOut = "sphere.off";
  meshCmd->add_option("--level", meshLevel, "subdivision level (0..8)");
  meshCmd->add_option("--out", meshOut, "output OFF path");

  // config-driven groups
  std::string configPath;
  auto addConfig = [&configPath](CLI::App* cmd) {
    cmd->add_option("--config", configPath, "experiment config file (dotted-key = value)");
  };

  auto* glCmd = app.add_subcommand("gl", "Ginzburg-Landau pipelines");
  glCmd->require_subcommand(1);
  for (const char* sub : {"solve", "spectrum", "trace", "certify"})
    addConfig(glCmd->add_subcommand(sub));

  auto* ymhCmd = app.add_subcommand("ymh", "abelian Yang-Mills-Higgs pipelines");
  ymhCmd->require_subcommand(1);
  for (const char* sub : {"solve", "bogomolny", "spectrum", "scan-epsilon"})
    addConfig(ymhCmd->add_subcommand(sub));

  auto* plCmd = app.add_subcommand("pointlab", "pointwise identity checks");
  plCmd->require_subcommand(1);
  int plN = 0;
  int plSamples = 0;
  uint64_t plSeed = 0;
  bool plSeedSet = false;
  for (const char* sub : {"sphere-gl", "sphere-ymh", "cpn"}) {
    auto* c = plCmd->add_subcommand(sub);
    c->add_option("--n", plN, "dimension (sphere: n of S^n; cpn: complex dimension)");
    c->add_option("--samples", plSamples, "sample count");
    c->add_option("--seed", plSeed, "RNG seed")->each([&](const std::string&) { plSeedSet = true; });
    addConfig(c);
  }

  auto* fdCmd = app.add_subcommand("fdcheck", "finite-difference oracles for gradients/Hessians");
  addConfig(fdCmd);
  auto* ivCmd = app.add_subcommand("innervar", "inner-variation flow oracles");
  addConfig(ivCmd);

  auto* cvCmd = app.add_subcommand("converge", "convergence studies across mesh levels");
  std::string cvExperiment = "prop21";
  std::string cvLevels = "3,4,5";
  cvCmd->add_option("--experiment", cvExperiment, "prop21 | fem-lambda1 | bogomolny");
  cvCmd->add_option("--levels", cvLevels, "comma-separated ascending levels");
  addConfig(cvCmd);

  auto* runCmd = app.add_subcommand("run", "run a named experiment pipeline");
  std::string runName = "fem-validate";
  runCmd->add_option("--experiment", runName, "experiment id");
  addConfig(runCmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (meshCmd->parsed()) {
      const auto mesh = stab::geom::build_icosphere(meshLevel);
      stab::geom::validate_mesh(mesh);
      stab::geom::write_off(mesh, meshOut);
      std::cout << "wrote " << meshOut << " (V=" << mesh.num_vertices()
                << " E=" << mesh.num_edges() << " F=" << mesh.num_faces() << ")\n";
      return 0;
    }

    auto cfg = stab::harness::load_config(configPath);

    if (glCmd->parsed()) {
      const std::string sub = glCmd->get_subcommands().front()->get_name();
      return finish(stab::harness::run_experiment(cfg, "gl-" + sub));
    }
    if (ymhCmd->parsed()) {
      const std::string sub = ymhCmd->get_subcommands().front()->get_name();
      return finish(stab::harness::run_experiment(cfg, "ymh-" + sub));
    }
    if (plCmd->parsed()) {
      const std::string sub = plCmd->get_subcommands().front()->get_name();
      if (plN > 0) cfg.pointlabN = plN;
      if (plSamples > 0) cfg.pointlabSamples = plSamples;
      if (plSeedSet) cfg.seed = plSeed;
      return finish(stab::harness::run_experiment(cfg, "pointlab-" + sub));
    }
    if (fdCmd->parsed()) return finish(stab::harness::run_experiment(cfg, "fdcheck"));
    if (ivCmd->parsed()) return finish(stab::harness::run_experiment(cfg, "innervar"));
    if (cvCmd->parsed())
      return finish(stab::harness::convergence_study(cfg, cvExperiment, parse_levels(cvLevels)));
    if (runCmd->parsed()) return finish(stab::harness::run_experiment(cfg, runName));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
