#include "stab/harness/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "stab/core/rng.hpp"
#include "stab/core/util.hpp"
#include "stab/geometry/fem.hpp"
#include "stab/geometry/fields.hpp"
#include "stab/geometry/mesh.hpp"
#include "stab/gl/gl.hpp"
#include "stab/gl/inner.hpp"
#include "stab/gl/oracle.hpp"
#include "stab/gl/solve.hpp"
#include "stab/gl/spectrum.hpp"
#include "stab/pointlab/cpn.hpp"
#include "stab/pointlab/lattice.hpp"
#include "stab/pointlab/sphere.hpp"
#include "stab/ymh/bogomolny.hpp"
#include "stab/ymh/bundle.hpp"
#include "stab/ymh/model.hpp"
#include "stab/ymh/solve.hpp"
#include "stab/ymh/spectrum.hpp"

namespace stab::harness {

namespace {

using geom::Vec3;
using gl::Complex;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct MeshBundle {
  geom::TriMesh mesh;
  geom::FemOperators fem;
};

// per-process cache; all consumers are single-threaded
const MeshBundle& mesh_at(int level) {
  static std::map<int, std::unique_ptr<MeshBundle>> cache;
  auto it = cache.find(level);
  if (it == cache.end()) {
    auto mb = std::make_unique<MeshBundle>();
    mb->mesh = geom::build_icosphere(level);
    geom::validate_mesh(mb->mesh);
    mb->fem = geom::assemble_fem(mb->mesh);
    it = cache.emplace(level, std::move(mb)).first;
  }
  return *it->second;
}

// analytic low-degree complex field (used as a smooth test function and as
// the random-low solver ansatz)
std::function<Complex(const Vec3&)> random_low_field(uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> c(10);
  for (auto& z : c) z = 0.35 * Complex(rng.normal(), rng.normal());
  return [c](const Vec3& x) {
    return c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[2] + c[4] * x[0] * x[1] +
           c[5] * x[0] * x[2] + c[6] * x[1] * x[2] + c[7] * (x[0] * x[0] - x[2] * x[2]) +
           c[8] * (x[1] * x[1] - x[2] * x[2]) + c[9] * x[0] * x[1] * x[2];
  };
}

std::function<Complex(const Vec3&)> ansatz_field(const std::string& name, uint64_t seed) {
  if (name == "constant-half") return [](const Vec3&) { return Complex(0.5, 0.0); };
  if (name == "zero") return [](const Vec3&) { return Complex(0.0, 0.0); };
  if (name == "equatorial") return [](const Vec3& x) { return Complex(x[0], x[1]); };
  if (name == "modulated")
    return [](const Vec3& x) { return Complex(x[0], x[1]) * (1.0 + 0.5 * x[2]); };
  if (name == "random-low") return random_low_field(seed);
  fail("unknown gl ansatz: " + name);
}

gl::GLState make_gl_ansatz(const MeshBundle& mb, double eps, const std::string& name,
                           uint64_t seed) {
  return gl::sampled_state(mb.mesh, mb.fem, eps, ansatz_field(name, seed));
}

double gl_grad_energy(const gl::GLState& s) {
  const VectorXd re = s.u.real(), im = s.u.imag();
  return re.dot(s.fem->stiffness * re) + im.dot(s.fem->stiffness * im);
}

void write_text_artifact(ReportDoc& doc, const std::string& dir, const std::string& name,
                         const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path);
  require(out.good(), "artifact: cannot open " + path);
  out << content;
  doc.artifacts.push_back(path);
}

// ---------------------------------------------------------------- fem

void run_fem_validate(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  doc.add("fem.area", mb.fem.totalArea, 4.0 * kPi, 1e-3 * 4.0 * kPi);
  EigOptions opts;
  opts.k = 9;
  opts.shift = -0.5;
  opts.tol = 1e-9;
  opts.seed = cfg.seed;
  const EigResult r = smallest_generalized_eigs(mb.fem.stiffness, mb.fem.mass, opts);
  doc.add("fem.eigsConverged", r.allConverged ? 1.0 : 0.0, 1.0, 0.0);
  doc.add("fem.lambda0", r.values[0], 0.0, 1e-8);
  for (int i = 0; i < 3; ++i)
    doc.add("fem.l1." + std::to_string(i), r.values[1 + i], 2.0, 0.01 * 2.0);
  for (int i = 0; i < 5; ++i)
    doc.add("fem.l2." + std::to_string(i), r.values[4 + i], 6.0, 0.02 * 6.0);
  doc.timing["eigIterations"] = r.iterations;
}

// ---------------------------------------------------------------- pointlab

void run_pointlab_sphere_gl(const ExperimentConfig& cfg, ReportDoc& doc) {
  for (int n = 2; n <= std::max(2, cfg.pointlabN); ++n) {
    const auto rep = pointlab::sphere_gl_trace(n, cfg.pointlabSamples, cfg.seed + n);
    doc.add("trace.gl.n" + std::to_string(n), rep.maxAbsDeviation, 0.0, 1e-10);
  }
}

void run_pointlab_sphere_ymh(const ExperimentConfig& cfg, ReportDoc& doc) {
  for (int n = 2; n <= std::max(2, cfg.pointlabN); ++n) {
    const auto rep = pointlab::sphere_ymh_trace(n, cfg.pointlabSamples, cfg.seed + n);
    doc.add("trace.ymh.n" + std::to_string(n), rep.maxAbsDeviation, 0.0, 1e-10);
  }
  // degenerate checks: n = 4 with Du = 0 (pure curvature), n = 2 with F = 0
  {
    pointlab::PointFrame pf = pointlab::random_point_frame(4, cfg.seed + 101);
    pf.data.Du.setZero();
    double sum = 0.0;
    for (int a = 0; a <= 4; ++a)
      sum += pointlab::ymh_conformal_integrand(pf, VectorXd::Unit(5, a));
    doc.add("trace.ymh.n4.DuZero", std::abs(sum), 0.0,
            1e-10 * (1.0 + pf.data.eEps + pf.data.F.squaredNorm()));
  }
  {
    pointlab::PointFrame pf = pointlab::random_point_frame(2, cfg.seed + 102);
    pf.data.F.setZero();
    double sum = 0.0;
    for (int a = 0; a <= 2; ++a)
      sum += pointlab::ymh_conformal_integrand(pf, VectorXd::Unit(3, a));
    doc.add("trace.ymh.n2.FZero", std::abs(sum), 0.0,
            1e-10 * (1.0 + pf.data.eEps + pf.data.Du.squaredNorm()));
  }
}

void run_pointlab_cpn(const ExperimentConfig& cfg, ReportDoc& doc) {
  const int nmax = std::min(3, cfg.pointlabN);
  const int samples = std::min(cfg.pointlabSamples, 50);
  for (int n = 1; n <= std::max(1, nmax); ++n) {
    const std::string tag = "cpn.n" + std::to_string(n) + ".";
    const auto fr = pointlab::cpn_frame_build(n);
    doc.add(tag + "q", fr.q, (n + 1) * (n + 1) - 1, 0.0);
    doc.add(tag + "dimP", static_cast<double>(fr.pIdx.size()), 2.0 * n, 0.0);
    doc.add(tag + "ricci", pointlab::cpn_ricci_deviation(fr), 0.0, 1e-6);
    doc.add(tag + "kahler", pointlab::cpn_kahler_deviation(fr, 32, cfg.seed + n), 0.0, 1e-6);
    doc.add(tag + "killingVsFS", pointlab::cpn_killing_vs_fs_deviation(fr), 0.0, 1e-8);
    doc.add(tag + "bracket", pointlab::cpn_bracket_deviation(fr), 0.0, 1e-8);
    doc.add(tag + "lemmaPrelim", pointlab::cpn_lemma_prelim_check(fr, samples, cfg.seed + 7 * n),
            0.0, 1e-6);
    const auto tr = pointlab::cpn_trace_check(fr, samples, cfg.seed + 11 * n);
    doc.add(tag + "q1sum", tr.q1sum, 0.0, 1e-5);
    doc.add(tag + "q2q3sum", tr.q2q3sum, 0.0, 1e-5);

    // basis independence of the trace sums
    Rng rng(cfg.seed + 13 * n);
    Eigen::MatrixXd Graw = rng.normal_matrix(fr.q, fr.q);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Graw);
    Eigen::MatrixXd O = qr.householderQ();
    const auto rotated = pointlab::rotate_basis(fr, O);
    const auto tr2 = pointlab::cpn_trace_check(rotated, samples, cfg.seed + 17 * n);
    doc.add(tag + "q1sumRotated", tr2.q1sum, 0.0, 1e-5);
    doc.add(tag + "q2q3sumRotated", tr2.q2q3sum, 0.0, 1e-5);

    const Eigen::MatrixXd H = pointlab::cpn_eigenfunction_hessian(n);
    const double diagTarget = -2.0 * (n + 1.0) / n;
    double diagDev = 0.0, fullDev = 0.0;
    const Eigen::MatrixXd target = -(n + 1.0) / (2.0 * n) * fr.G;
    for (int i = 0; i < 2 * n; ++i) diagDev = std::max(diagDev, std::abs(H(i, i) - diagTarget));
    fullDev = (H - target).cwiseAbs().maxCoeff();
    doc.add(tag + "hessDiag", diagDev, 0.0, 1e-6);
    doc.add(tag + "hessFull", fullDev, 0.0, 1e-6);
    doc.add(tag + "eigenfunction", pointlab::cpn_eigenfunction_laplacian(n), -(n + 1.0), 1e-6);
  }
}

// ---------------------------------------------------------------- gl

void run_gl_solve(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  gl::GLSolveSchedule sched;
  sched.flowSteps = cfg.glSolverFlowSteps;
  sched.flowStep = cfg.glSolverFlowStep;
  sched.newtonTol = cfg.glSolverTol;
  sched.newtonMaxIter = cfg.glSolverMaxIter;
  const auto start = make_gl_ansatz(mb, cfg.glEpsilon, cfg.glAnsatz, cfg.seed);
  const auto res = gl::gl_solve(start, sched);
  doc.add("gl.residual", res.finalResidual, 0.0, 1e-8, "le");
  doc.add("gl.energy", gl::gl_energy(res.state), 0.0, 1e-12, "ge");
  doc.add("gl.maxAbs", gl::state_max_abs(res.state), 1.0 + 1e-6, 0.0, "le");
  double worstIncrease = 0.0;
  for (size_t i = 0; i + 1 < res.log.size(); ++i)
    if (res.log[i + 1].phase == "flow" && res.log[i].phase == "flow")
      worstIncrease = std::max(worstIncrease, res.log[i + 1].energy - res.log[i].energy);
  doc.add("gl.flowMonotone", worstIncrease, 0.0, 1e-12 * (1.0 + gl::gl_energy(res.state)), "le");
  // non-constancy indicator (0 = constant modulus field, 1 = structured)
  const double spread = std::sqrt(gl_grad_energy(res.state));
  doc.add("gl.gradNorm", spread, 0.0, 1e30, "ge");
  doc.timing["solveLogEntries"] = static_cast<long long>(res.log.size());
  gl::write_state_json(res.state, (std::filesystem::path(cfg.outputDir) / "gl-state.json").string());
  doc.artifacts.push_back((std::filesystem::path(cfg.outputDir) / "gl-state.json").string());
}

void run_gl_spectrum(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  gl::GLSolveSchedule sched;
  sched.flowSteps = cfg.glSolverFlowSteps;
  sched.flowStep = cfg.glSolverFlowStep;
  sched.newtonTol = cfg.glSolverTol;
  sched.newtonMaxIter = cfg.glSolverMaxIter;
  const auto res = gl::gl_solve(make_gl_ansatz(mb, cfg.glEpsilon, cfg.glAnsatz, cfg.seed), sched);
  const auto rep = gl::gl_spectrum(res.state, cfg.glSpectrumK, cfg.seed);
  doc.add("glspec.converged", rep.allConverged ? 1.0 : 0.0, 1.0, 0.0);
  doc.add("glspec.maxResidualNorm", rep.residualNorms.maxCoeff(), 0.0, 1e-8, "le");
  double ascending = 1.0;
  for (int i = 0; i + 1 < rep.eigenvalues.size(); ++i)
    if (rep.eigenvalues[i] > rep.eigenvalues[i + 1] + 1e-12) ascending = 0.0;
  doc.add("glspec.ascending", ascending, 1.0, 0.0);
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,eigenvalue,residualNorm\n";
  for (int i = 0; i < rep.eigenvalues.size(); ++i)
    csv << i << "," << rep.eigenvalues[i] << "," << rep.residualNorms[i] << "\n";
  write_text_artifact(doc, cfg.outputDir, "gl-spectrum.csv", csv.str());
}

// discretization tolerance for quantities that vanish only in the continuum
double disc_tol(int level) { return 50.0 * std::pow(4.0, -level); }

void run_gl_trace(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  gl::GLSolveSchedule sched;
  sched.flowSteps = cfg.glSolverFlowSteps;
  sched.flowStep = cfg.glSolverFlowStep;
  sched.newtonTol = cfg.glSolverTol;
  sched.newtonMaxIter = cfg.glSolverMaxIter;
  const auto res = gl::gl_solve(make_gl_ansatz(mb, cfg.glEpsilon, cfg.glAnsatz, cfg.seed), sched);
  const gl::GLState& s = res.state;
  doc.add("gltrace.residual", res.finalResidual, 0.0, 1e-8, "le");

  const double grad2 = gl_grad_energy(s);
  const double scale = 1.0 + grad2;
  double traceInner = 0.0;
  for (int axis = 0; axis < 3; ++axis)
    traceInner += gl::gl_inner_second_critical(s, Vec3::Unit(axis));
  doc.add("gltrace.innerTraceSum", std::abs(traceInner), 0.0, 1e-6 * scale);

  const double dtol = (10.0 * res.finalResidual + disc_tol(cfg.meshLevel)) * scale;
  double traceOuter = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<Vec3> Xv(mb.mesh.num_vertices());
    for (int v = 0; v < mb.mesh.num_vertices(); ++v) {
      const Vec3& x = mb.mesh.vertices[v];
      Xv[v] = Vec3::Unit(axis) - x.dot(Vec3::Unit(axis)) * x;
    }
    const VectorXcd vx = gl::nabla_X_u(s, Xv);
    const double outer = gl::gl_outer_second_variation(s, vx);
    traceOuter += outer;
    const double innerC = gl::gl_inner_second_critical(s, Vec3::Unit(axis));
    const auto jet = geom::conformal_field_jet(VectorXd(Vec3::Unit(axis)), 2);
    const double innerG = gl::gl_inner_second_general(s, jet);
    doc.add("gltrace.corOuterInner.x" + std::to_string(axis), std::abs(innerC - outer), 0.0, dtol);
    doc.add("gltrace.generalVsCritical.x" + std::to_string(axis), std::abs(innerG - innerC), 0.0,
            dtol);
    doc.add("gltrace.innerFirst.x" + std::to_string(axis), std::abs(gl::gl_inner_first(s, jet)),
            0.0, dtol);
  }
  doc.add("gltrace.outerTraceSum", std::abs(traceOuter), 0.0, dtol);
}

void run_gl_certify(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const std::vector<double> epsList = {0.15, 0.2, 0.25, 0.3};
  const std::vector<std::string> ansatzList = {"constant-half", "zero", "equatorial", "modulated",
                                               "random-low"};
  int converged = 0, nonConstantCertified = 0, nonConstantSeen = 0;
  for (double eps : epsList) {
    for (const auto& ansatz : ansatzList) {
      gl::GLSolveSchedule sched;
      sched.flowSteps = cfg.glSolverFlowSteps;
      sched.flowStep = cfg.glSolverFlowStep;
      sched.newtonTol = cfg.glSolverTol;
      sched.newtonMaxIter = cfg.glSolverMaxIter;
      const auto res = gl::gl_solve(make_gl_ansatz(mb, eps, ansatz, cfg.seed), sched);
      std::ostringstream tagS;
      tagS << "glcert.eps" << eps << "." << ansatz << ".";
      const std::string tag = tagS.str();
      if (res.finalResidual > 1e-8) continue;  // the criterion is conditional on convergence
      ++converged;
      const gl::GLState& s = res.state;
      doc.add(tag + "maxAbs", gl::state_max_abs(s), 1.0 + 1e-6, 0.0, "le");

      // classify: zero / unit constant / non-constant
      const double maxAbs = gl::state_max_abs(s);
      Complex mean(0.0, 0.0);
      double msum = 0.0;
      for (int v = 0; v < s.u.size(); ++v) {
        mean += s.fem->lumpedMass[v] * s.u[v];
        msum += s.fem->lumpedMass[v];
      }
      mean /= msum;
      double dev = 0.0;
      for (int v = 0; v < s.u.size(); ++v) dev = std::max(dev, std::abs(s.u[v] - mean));

      if (maxAbs <= 1e-8) {
        const auto rep = gl::gl_spectrum(s, 2, cfg.seed);
        doc.add(tag + "zeroLambda1", rep.eigenvalues[0], -1.0 / (eps * eps),
                0.01 / (eps * eps));
        const auto cert = gl::gl_instability_certificate(s, 1e-8, cfg.seed);
        doc.add(tag + "zeroCertified", cert.found ? 1.0 : 0.0, 1.0, 0.0);
      } else if (dev <= 1e-6) {
        doc.add(tag + "constAbs", std::abs(mean), 1.0, 1e-6);
        const auto idx = gl::gl_morse_index(s, 1e-8);
        doc.add(tag + "constIndex", idx.index, 0.0, 0.0);
        doc.add(tag + "constCertified", idx.certified ? 1.0 : 0.0, 1.0, 0.0);
      } else {
        ++nonConstantSeen;
        const auto cert = gl::gl_instability_certificate(s, 1e-8, cfg.seed);
        doc.add(tag + "unstable", cert.found ? 1.0 : 0.0, 1.0, 0.0);
        doc.add(tag + "quotient", cert.rayleighQuotient, 0.0, 1e-30, "le");
        if (cert.found) ++nonConstantCertified;
        const double grad2 = gl_grad_energy(s);
        double traceInner = 0.0;
        for (int axis = 0; axis < 3; ++axis)
          traceInner += gl::gl_inner_second_critical(s, Vec3::Unit(axis));
        doc.add(tag + "traceSum", std::abs(traceInner), 0.0, 1e-6 * (1.0 + grad2));
      }
    }
  }
  doc.add("glcert.convergedCount", converged, 3.0, 1e30, "ge");
  doc.add("glcert.nonConstantSeen", nonConstantSeen, 0.0, 1e30, "ge");
  doc.add("glcert.nonConstantCertified", nonConstantCertified, nonConstantSeen, 0.0);
}

// ---------------------------------------------------------------- fd checks

void run_fdcheck(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const int V = mb.mesh.num_vertices();
  Rng rng(cfg.seed);

  // --- GL outer gradient / Hessian
  gl::GLState s = gl::sampled_state(mb.mesh, mb.fem, 0.5, random_low_field(cfg.seed + 1));
  VectorXcd v(V), w(V);
  const auto vfield = random_low_field(cfg.seed + 2);
  const auto wfield = random_low_field(cfg.seed + 3);
  for (int i = 0; i < V; ++i) {
    v[i] = vfield(mb.mesh.vertices[i]);
    w[i] = wfield(mb.mesh.vertices[i]);
  }
  auto energyAt = [&](double t, const VectorXcd& dir) {
    gl::GLState st = s;
    st.u = s.u + t * dir;
    return gl::gl_energy(st);
  };
  const double dE = gl::gl_outer_first_variation(s, v);
  {
    const double h = 1e-5;
    const double cd = (energyAt(h, v) - energyAt(-h, v)) / (2.0 * h);
    doc.add("fd.gl.grad", std::abs(cd - dE) / std::max(std::abs(dE), 1e-12), 0.0, 1e-6);
    // observed order from a larger-step ladder where truncation dominates
    const double c1 = (energyAt(2e-3, v) - energyAt(-2e-3, v)) / 4e-3;
    const double c2 = (energyAt(1e-3, v) - energyAt(-1e-3, v)) / 2e-3;
    const double c3 = (energyAt(5e-4, v) - energyAt(-5e-4, v)) / 1e-3;
    const double order = std::log2(std::abs(c1 - c2) / std::abs(c2 - c3));
    doc.add("fd.gl.gradOrder", order, 1.9, 1e30, "ge");
  }
  {
    const double h = 1e-4;
    const double d2 = gl::gl_outer_second_variation(s, v);
    const double cd = (energyAt(h, v) - 2.0 * gl::gl_energy(s) + energyAt(-h, v)) / (h * h);
    doc.add("fd.gl.hess", std::abs(cd - d2) / std::max(std::abs(d2), 1e-12), 0.0, 1e-5);
  }
  {
    // mass-weighted symmetry of L_u
    const VectorXcd Lv = gl::gl_hessian_apply(s, v);
    const VectorXcd Lw = gl::gl_hessian_apply(s, w);
    double a = 0.0, b = 0.0, nv = 0.0;
    for (int i = 0; i < V; ++i) {
      const double m = mb.fem.lumpedMass[i];
      a += m * (Lv[i].real() * w[i].real() + Lv[i].imag() * w[i].imag());
      b += m * (v[i].real() * Lw[i].real() + v[i].imag() * Lw[i].imag());
      nv += m * (std::norm(v[i]) + std::norm(w[i]));
    }
    doc.add("fd.gl.hessSymmetry", std::abs(a - b), 0.0, 1e-12 * (1.0 + std::abs(a) + nv));
    const double quad = gl::gl_outer_second_variation(s, v);
    double av = 0.0;
    const VectorXcd Lv2 = gl::gl_hessian_apply(s, v);
    for (int i = 0; i < V; ++i)
      av += mb.fem.lumpedMass[i] * (Lv2[i].real() * v[i].real() + Lv2[i].imag() * v[i].imag());
    doc.add("fd.gl.quadraticForm", std::abs(av - quad), 0.0, 1e-12 * (1.0 + std::abs(quad)));
  }

  // --- YMH gradient / Hessian (smooth random data; a white-noise state at
  // fine levels drowns the centered difference in cancellation noise)
  const auto bundle = ymh::bundle_init(mb.mesh, mb.fem, cfg.ymhDegree);
  const int E = mb.mesh.num_edges();
  VectorXcd u0(V);
  const auto ufield = random_low_field(cfg.seed + 4);
  for (int i = 0; i < V; ++i) u0[i] = Complex(0.7, 0.0) + 0.4 * ufield(mb.mesh.vertices[i]);
  ymh::YMHState ys = ymh::make_state(bundle, u0, cfg.ymhEpsilon);
  {
    // smooth flat direction: low-degree section perturbation plus the line
    // integrals of an ambient linear vector field along the edges
    const auto dfield = random_low_field(cfg.seed + 5);
    Rng r2(cfg.seed + 9);
    const Eigen::Matrix3d Adir = 0.5 * r2.normal_matrix(3, 3);
    VectorXd dir(2 * V + E);
    for (int i = 0; i < V; ++i) {
      const Complex dv = dfield(mb.mesh.vertices[i]);
      dir[2 * i] = dv.real();
      dir[2 * i + 1] = dv.imag();
    }
    for (int e = 0; e < E; ++e) {
      const Vec3& pi = mb.mesh.vertices[mb.mesh.edges[e][0]];
      const Vec3& pj = mb.mesh.vertices[mb.mesh.edges[e][1]];
      dir[2 * V + e] = (Adir * ((pi + pj) / 2.0)).dot(pj - pi);
    }
    dir /= dir.norm();
    const VectorXd x0 = ymh::state_to_flat(ys);
    auto Efun = [&](double t) { return ymh::ymh_energy(ymh::flat_to_state(ys, x0 + t * dir)); };
    const VectorXd gflat = ymh::gradient_to_flat(ymh::ymh_gradient(ys));
    const double g = gflat.dot(dir);
    const double h = 1e-6;
    const double cd = (Efun(h) - Efun(-h)) / (2.0 * h);
    doc.add("fd.ymh.grad", std::abs(cd - g) / std::max(std::abs(g), 1e-12), 0.0, 1e-6);
    // second check along the normalized gradient itself
    const VectorXd gdirn = gflat / gflat.norm();
    auto Eg = [&](double t) { return ymh::ymh_energy(ymh::flat_to_state(ys, x0 + t * gdirn)); };
    const double cdg = (Eg(h) - Eg(-h)) / (2.0 * h);
    doc.add("fd.ymh.gradDescentDir", std::abs(cdg - gflat.norm()) / gflat.norm(), 0.0, 1e-6);
    // wide stencil: the quadratic form along a unit flat direction is three
    // orders below E, so narrow second differences are cancellation-bound
    const double E0 = Efun(0.0);
    const double h2 = 3e-3;
    const double cd2 = (Efun(h2) - 2.0 * E0 + Efun(-h2)) / (h2 * h2);
    const auto H = ymh::ymh_hessian_matrix(ys);
    const double quad = dir.dot(H * dir);
    doc.add("fd.ymh.hess", std::abs(cd2 - quad) / std::max(std::abs(quad), 1e-12), 0.0, 1e-5);
    {
      // the same form through first differences of the exact gradient
      const double hg = 1e-5;
      const VectorXd gp =
          ymh::gradient_to_flat(ymh::ymh_gradient(ymh::flat_to_state(ys, x0 + hg * dir)));
      const VectorXd gm =
          ymh::gradient_to_flat(ymh::ymh_gradient(ymh::flat_to_state(ys, x0 - hg * dir)));
      const double cdg = dir.dot((gp - gm) / (2.0 * hg));
      doc.add("fd.ymh.hessViaGrad", std::abs(cdg - quad) / std::max(std::abs(quad), 1e-12), 0.0,
              1e-6);
    }
    const Eigen::SparseMatrix<double> asym = H - Eigen::SparseMatrix<double>(H.transpose());
    doc.add("fd.ymh.hessSymmetry", asym.coeffs().cwiseAbs().maxCoeff(), 0.0, 1e-12);
    // gauge-orbit directions annihilate the differential
    Rng r3(cfg.seed + 10);
    const VectorXd phi = r3.normal_vector(V);
    const VectorXd gdir = ymh::gauge_direction(ys, phi);
    const double dGauge = gflat.dot(gdir);
    const double gscale = gflat.norm() * gdir.norm();
    doc.add("fd.ymh.gaugeKernel", std::abs(dGauge), 0.0, 1e-12 * (1.0 + gscale));
  }
}

void run_innervar(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const double eps = cfg.glEpsilon;
  const auto fn = random_low_field(cfg.seed + 21);
  const gl::GLState s = gl::sampled_state(mb.mesh, mb.fem, eps, fn);
  Rng rng(cfg.seed + 22);
  VectorXd xiv = rng.normal_vector(3);
  xiv /= xiv.norm();
  const Vec3 xi(xiv);
  const auto jet = geom::conformal_field_jet(xiv, 2);
  auto g = [&](double t) { return gl::flowed_energy_quadrature(mb.mesh, eps, fn, xi, t); };

  {
    const double analytic = gl::gl_inner_first(s, jet);
    auto cd = [&](double t) { return (g(t) - g(-t)) / (2.0 * t); };
    const double c1 = cd(0.02), c2 = cd(0.01), c3 = cd(0.005);
    const double order = std::log2(std::abs(c1 - c2) / std::abs(c2 - c3));
    const double extrap = (4.0 * c3 - c2) / 3.0;
    doc.add("innervar.firstOrder", order, 1.9, 1e30, "ge");
    doc.add("innervar.firstMatch", std::abs(analytic - extrap) / std::max(std::abs(extrap), 1e-8),
            0.0, 1e-3);
  }
  {
    const double analytic = gl::gl_inner_second_general(s, jet);
    const double g0 = g(0.0);
    auto sd = [&](double t) { return (g(t) - 2.0 * g0 + g(-t)) / (t * t); };
    const double s1 = sd(0.04), s2 = sd(0.02), s3 = sd(0.01);
    const double order = std::log2(std::abs(s1 - s2) / std::abs(s2 - s3));
    const double extrap = (4.0 * s3 - s2) / 3.0;
    doc.add("innervar.secondOrder", order, 1.9, 1e30, "ge");
    doc.add("innervar.secondMatch", std::abs(analytic - extrap) / std::max(std::abs(extrap), 1e-8),
            0.0, 1e-3);
  }
  doc.add("innervar.prop21Gap", std::abs(gl::prop_inner_outer_gap(s, jet)), 0.0,
          disc_tol(cfg.meshLevel) * (1.0 + gl_grad_energy(s)));

  // rotation-field sanity: Killing flows leave the energy invariant, so both
  // variations vanish up to quadrature error
  const auto rjet = geom::rotation_field_jet(Vec3(0.3, -0.2, 0.9).normalized());
  doc.add("innervar.rotationFirst", std::abs(gl::gl_inner_first(s, rjet)), 0.0,
          disc_tol(cfg.meshLevel) * (1.0 + gl_grad_energy(s)));
}

// ---------------------------------------------------------------- ymh

ymh::YMHState make_vortex_start(const MeshBundle& mb, int degree, double eps, uint64_t seed) {
  const auto bundle = ymh::bundle_init(mb.mesh, mb.fem, degree);
  Rng rng(seed);
  VectorXcd u(mb.mesh.num_vertices());
  for (int v = 0; v < mb.mesh.num_vertices(); ++v)
    u[v] = Complex(0.75 + 0.2 * rng.normal(), 0.2 * rng.normal());
  return ymh::make_state(bundle, u, eps);
}

void run_ymh_vortex(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const double eps = cfg.ymhEpsilon;
  const int d = cfg.ymhDegree;

  // bundle construction and flux bookkeeping
  const auto bundle = ymh::bundle_init(mb.mesh, mb.fem, d);
  doc.add("ymh.bundleDegree", ymh::ymh_degree(bundle), d, 0.0);
  doc.add("ymh.totalFlux", ymh::plaquette_fluxes(bundle).sum(), kTwoPi * d, 1e-12 * (1 + std::abs(d)));

  // gauge invariance at a random state
  ymh::YMHState probe = make_vortex_start(mb, d, eps, cfg.seed + 77);
  {
    Rng rng(cfg.seed + 78);
    const VectorXd phi = rng.normal_vector(mb.mesh.num_vertices());
    const double e0 = ymh::ymh_energy(probe);
    const auto gauged = ymh::gauge_transform(probe, ymh::GaugeFunction{phi});
    doc.add("ymh.gaugeEnergy", std::abs(ymh::ymh_energy(gauged) - e0), 0.0, 1e-12 * (1.0 + e0));
    doc.add("ymh.gaugeDegree", ymh::ymh_degree(gauged.bundle), d, 0.0);
    // degree quantization under small phase perturbations
    ymh::YMHState bumped = probe;
    for (int e = 0; e < mb.mesh.num_edges(); ++e)
      bumped.bundle.edgePhases[e] =
          wrap_angle(bumped.bundle.edgePhases[e] + (kPi / 9.0) * (rng.uniform() - 0.5));
    doc.add("ymh.degreeQuantized", ymh::ymh_degree(bumped.bundle), d, 0.0);
  }

  // minimize
  ymh::YMHSchedule sched;
  const auto res = ymh_solve(make_vortex_start(mb, d, eps, cfg.seed), sched);
  doc.add("ymh.gradNorm", res.finalGradNorm, 0.0, 1e-8, "le");
  doc.add("ymh.degreeAfterSolve", ymh::ymh_degree(res.state.bundle), d, 0.0);
  const double E = ymh::ymh_energy(res.state);
  doc.add("ymh.energyOver2pi", E / kTwoPi, 0.98 * std::abs(d), 1e-12, "ge");
  doc.add("ymh.energyOver2piUpper", E / kTwoPi, 1.05 * std::abs(d), 1e-12, "le");
  doc.add("ymh.maxAbs", ymh::max_section_abs(res.state), 1.0 + 1e-6, 0.0, "le");
  double worstIncrease = 0.0;
  for (size_t i = 0; i + 1 < res.log.size(); ++i)
    worstIncrease = std::max(worstIncrease, res.log[i + 1].energy - res.log[i].energy);
  doc.add("ymh.energyMonotone", worstIncrease, 0.0, 1e-12 * (1.0 + E), "le");
  doc.timing["solveIterations"] = res.iterations;

  // Bogomolny defect and face residuals
  const auto bog = ymh::bogomolny_defect(res.state);
  doc.add("ymh.defectLower", bog.defect, 0.0, 1e-3, "ge");
  doc.add("ymh.defectUpper", bog.defect, 0.05 * kTwoPi * std::abs(d), 0.0, "le");
  doc.add("ymh.defectVsResiduals", std::abs(bog.defect - bog.residualSum), 0.0,
          0.10 * (std::abs(bog.residualSum) + 1e-3));

  // gauge-fixed spectrum: stable vortex
  const auto spec = ymh::ymh_spectrum_gauge_fixed(res.state, 6, cfg.seed);
  doc.add("ymh.lambda1", spec.eigenvalues[0], -1e-6 * spec.hessianNormEstimate, 0.0, "ge");
  doc.add("ymh.specResidual", spec.residualNorms.maxCoeff(), 0.0, 1e-8, "le");
  {
    // gauge directions are near-exact zero modes of the Hessian
    Rng rng(cfg.seed + 99);
    const VectorXd phi = rng.normal_vector(mb.mesh.num_vertices());
    const VectorXd gdir = ymh::gauge_direction(res.state, phi);
    const auto H = ymh::ymh_hessian_matrix(res.state);
    const double rel = (H * gdir).norm() / (spec.hessianNormEstimate * gdir.norm());
    doc.add("ymh.gaugeZeroMode", rel, 0.0, 1e-8);
  }

  // per-xi stability integrand (lattice form) and its xi-sum
  {
    const double scale = 1.0 + E;
    double sum = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double val =
          pointlab::sphere_per_xi_stability_integrand(res.state, Vec3::Unit(axis));
      sum += val;
      doc.add("ymh.xiIntegrand." + std::to_string(axis), val, -1e-3 * scale, 0.0, "ge");
    }
    const double target = 8.0 * pointlab::lattice_curvature_energy(res.state);
    doc.add("ymh.xiSumVs8eps2F2", std::abs(sum - target), 0.0, 0.05 * std::max(target, 1e-6));
  }

  // trivial pair (0, flat) is unstable with quotient -1/eps^2
  {
    const auto flat = ymh::bundle_init(mb.mesh, mb.fem, 0);
    ymh::YMHState zero = ymh::make_state(flat, VectorXcd::Zero(mb.mesh.num_vertices()), eps);
    VectorXd dir = VectorXd::Zero(2 * mb.mesh.num_vertices() + mb.mesh.num_edges());
    for (int v = 0; v < mb.mesh.num_vertices(); ++v) dir[2 * v] = 1.0;
    const double q = ymh::hessian_quotient(zero, dir);
    doc.add("ymh.trivialPairQuotient", q, -1.0 / (eps * eps), 0.05 / (eps * eps));
    const auto zspec = ymh::ymh_spectrum_gauge_fixed(zero, 2, cfg.seed);
    doc.add("ymh.trivialPairLambda1", zspec.eigenvalues[0], 0.0, 1e-12, "le");
  }

  ymh::write_state_json(res.state,
                        (std::filesystem::path(cfg.outputDir) / "ymh-state.json").string());
  doc.artifacts.push_back((std::filesystem::path(cfg.outputDir) / "ymh-state.json").string());
  std::ostringstream csv;
  csv.precision(17);
  csv << "faceIndex,residA,residB,area\n";
  for (int f = 0; f < bog.residA.size(); ++f)
    csv << f << "," << bog.residA[f] << "," << bog.residB[f] << "," << mb.fem.faceArea[f] << "\n";
  write_text_artifact(doc, cfg.outputDir, "ymh-face-residuals.csv", csv.str());
}

void run_ymh_bogomolny(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const auto res = ymh_solve(make_vortex_start(mb, cfg.ymhDegree, cfg.ymhEpsilon, cfg.seed),
                             ymh::YMHSchedule{});
  const auto bog = ymh::bogomolny_defect(res.state);
  doc.add("bog.gradNorm", res.finalGradNorm, 0.0, 1e-8, "le");
  doc.add("bog.defectLower", bog.defect, 0.0, 1e-3, "ge");
  doc.add("bog.defectVsResiduals", std::abs(bog.defect - bog.residualSum), 0.0,
          0.10 * (std::abs(bog.residualSum) + 1e-3));
  std::ostringstream csv;
  csv.precision(17);
  csv << "faceIndex,residA,residB,area\n";
  for (int f = 0; f < bog.residA.size(); ++f)
    csv << f << "," << bog.residA[f] << "," << bog.residB[f] << "," << mb.fem.faceArea[f] << "\n";
  write_text_artifact(doc, cfg.outputDir, "ymh-face-residuals.csv", csv.str());
}

void run_ymh_spectrum(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  // vacuum on the trivial bundle
  const auto flat = ymh::bundle_init(mb.mesh, mb.fem, 0);
  ymh::YMHState vac = ymh::make_state(flat, VectorXcd::Ones(mb.mesh.num_vertices()), cfg.ymhEpsilon);
  const auto vspec = ymh::ymh_spectrum_gauge_fixed(vac, 4, cfg.seed);
  doc.add("ymhspec.vacuumLambda1", vspec.eigenvalues[0], 0.0, 1e-8, "ge");
  // minimized state at the configured degree
  const auto res = ymh_solve(make_vortex_start(mb, cfg.ymhDegree, cfg.ymhEpsilon, cfg.seed),
                             ymh::YMHSchedule{});
  const auto spec = ymh::ymh_spectrum_gauge_fixed(res.state, cfg.glSpectrumK, cfg.seed);
  doc.add("ymhspec.lambda1", spec.eigenvalues[0], -1e-6 * spec.hessianNormEstimate, 0.0, "ge");
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,eigenvalue,residualNorm\n";
  for (int i = 0; i < spec.eigenvalues.size(); ++i)
    csv << i << "," << spec.eigenvalues[i] << "," << spec.residualNorms[i] << "\n";
  write_text_artifact(doc, cfg.outputDir, "ymh-spectrum.csv", csv.str());
}

void run_ymh_scan_epsilon(const ExperimentConfig& cfg, ReportDoc& doc) {
  const auto& mb = mesh_at(cfg.meshLevel);
  const std::vector<double> epsList = {0.2, 0.3, 0.5, 0.9};
  double stableBoundary = 0.0;
  for (double eps : epsList) {
    const auto res = ymh_solve(make_vortex_start(mb, cfg.ymhDegree, eps, cfg.seed),
                               ymh::YMHSchedule{});
    const auto spec = ymh::ymh_spectrum_gauge_fixed(res.state, 4, cfg.seed);
    const bool stable = spec.eigenvalues[0] >= -1e-6 * spec.hessianNormEstimate;
    std::ostringstream tag;
    tag << "scan.eps" << eps;
    doc.add(tag.str() + ".energyOver2pi", ymh::ymh_energy(res.state) / kTwoPi, 0.0, 1e30, "ge");
    doc.add(tag.str() + ".lambda1Rel", spec.eigenvalues[0] / spec.hessianNormEstimate, -1e30, 1e30,
            "ge");
    if (stable) stableBoundary = std::max(stableBoundary, eps);
  }
  doc.add("scan.stableBoundary", stableBoundary, 0.3, 1e30, "ge");
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"fem-validate",  "pointlab-sphere-gl", "pointlab-sphere-ymh", "pointlab-cpn",
          "gl-solve",      "gl-spectrum",        "gl-trace",            "gl-certify",
          "fdcheck",       "innervar",           "ymh-vortex",          "ymh-bogomolny",
          "ymh-spectrum",  "ymh-scan-epsilon"};
}

ReportDoc run_experiment(const ExperimentConfig& cfg, const std::string& which) {
  ReportDoc doc;
  doc.experimentId = which;
  doc.configEcho = cfg.echo();
  try {
    if (which == "fem-validate") run_fem_validate(cfg, doc);
    else if (which == "pointlab-sphere-gl") run_pointlab_sphere_gl(cfg, doc);
    else if (which == "pointlab-sphere-ymh") run_pointlab_sphere_ymh(cfg, doc);
    else if (which == "pointlab-cpn") run_pointlab_cpn(cfg, doc);
    else if (which == "gl-solve") run_gl_solve(cfg, doc);
    else if (which == "gl-spectrum") run_gl_spectrum(cfg, doc);
    else if (which == "gl-trace") run_gl_trace(cfg, doc);
    else if (which == "gl-certify") run_gl_certify(cfg, doc);
    else if (which == "fdcheck") run_fdcheck(cfg, doc);
    else if (which == "innervar") run_innervar(cfg, doc);
    else if (which == "ymh-vortex") run_ymh_vortex(cfg, doc);
    else if (which == "ymh-bogomolny") run_ymh_bogomolny(cfg, doc);
    else if (which == "ymh-spectrum") run_ymh_spectrum(cfg, doc);
    else if (which == "ymh-scan-epsilon") run_ymh_scan_epsilon(cfg, doc);
    else
      fail("unknown experiment: " + which + " (known: fem-validate, pointlab-sphere-gl, "
           "pointlab-sphere-ymh, pointlab-cpn, gl-solve, gl-spectrum, gl-trace, gl-certify, "
           "fdcheck, innervar, ymh-vortex, ymh-bogomolny, ymh-spectrum, ymh-scan-epsilon)");
  } catch (const std::exception& e) {
    doc.add("error." + which, 0.0, 1.0, 0.0);
    doc.configEcho["error"] = e.what();
  }
  write_report(doc, cfg.outputDir);
  return doc;
}

ReportDoc convergence_study(const ExperimentConfig& cfg, const std::string& experiment,
                            const std::vector<int>& levels) {
  require(!levels.empty(), "convergence_study: empty level list");
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    require(levels[i] < levels[i + 1], "convergence_study: levels must ascend");
  ReportDoc doc;
  doc.experimentId = "converge-" + experiment;
  doc.configEcho = cfg.echo();

  std::vector<double> values;
  std::ostringstream csv;
  csv.precision(17);
  csv << "level,value\n";
  try {
    for (int level : levels) {
      const auto& mb = mesh_at(level);
      double value = 0.0;
      if (experiment == "prop21") {
        const auto fn = random_low_field(cfg.seed + 21);
        const gl::GLState s = gl::sampled_state(mb.mesh, mb.fem, cfg.glEpsilon, fn);
        Rng rng(cfg.seed + 22);
        VectorXd xiv = rng.normal_vector(3);
        xiv /= xiv.norm();
        value = std::abs(gl::prop_inner_outer_gap(s, geom::conformal_field_jet(xiv, 2)));
      } else if (experiment == "fem-lambda1") {
        EigOptions opts;
        opts.k = 4;
        opts.shift = -0.5;
        opts.seed = cfg.seed;
        const EigResult r = smallest_generalized_eigs(mb.fem.stiffness, mb.fem.mass, opts);
        for (int i = 1; i <= 3; ++i)
          value = std::max(value, std::abs(r.values[i] - 2.0) / 2.0);
      } else if (experiment == "bogomolny") {
        const auto res = ymh_solve(make_vortex_start(mb, cfg.ymhDegree, cfg.ymhEpsilon, cfg.seed),
                                   ymh::YMHSchedule{});
        value = ymh::bogomolny_defect(res.state).defect;
      } else {
        fail("unknown convergence experiment: " + experiment +
             " (known: prop21, fem-lambda1, bogomolny)");
      }
      values.push_back(value);
      csv << level << "," << value << "\n";
    }
  } catch (const std::exception& e) {
    doc.add("error.converge", 0.0, 1.0, 0.0);
    doc.configEcho["error"] = e.what();
    write_report(doc, cfg.outputDir);
    return doc;
  }

  if (experiment == "bogomolny") {
    for (size_t i = 0; i + 1 < values.size(); ++i)
      doc.add("converge.nonIncreasing." + std::to_string(i), values[i + 1],
              1.2 * std::max(values[i], 1e-4), 0.0, "le");
  } else {
    double orderSum = 0.0;
    int cnt = 0;
    for (size_t i = 0; i + 1 < values.size(); ++i) {
      orderSum += std::log2(std::abs(values[i]) / std::max(std::abs(values[i + 1]), 1e-300));
      ++cnt;
    }
    const double order = cnt ? orderSum / cnt : 0.0;
    const double want = (experiment == "fem-lambda1") ? 1.8 : 1.0;
    doc.add("converge.order", order, want, 1e30, "ge");
  }
  for (size_t i = 0; i < values.size(); ++i)
    doc.add("converge.value.L" + std::to_string(levels[i]), values[i], 0.0, 1e30, "le");
  write_text_artifact(doc, cfg.outputDir, "converge-" + experiment + ".csv", csv.str());
  write_report(doc, cfg.outputDir);
  return doc;
}

}  // namespace stab::harness
