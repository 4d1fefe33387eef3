#include "stab/gl/solve.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "stab/core/util.hpp"

namespace stab::gl {

GLSolveResult gl_solve(const GLState& start, const GLSolveSchedule& schedule) {
  require(schedule.flowStep > 0.0 && schedule.newtonTol > 0.0 && schedule.newtonMaxIter > 0,
          "gl_solve: schedule values must be positive");
  GLSolveResult out;
  GLState s = start;

  double dt = schedule.flowStep;
  const double dtMax = 10.0 * schedule.flowStep;
  double E = gl_energy(s);
  for (int step = 0; step < schedule.flowSteps; ++step) {
    const VectorXcd r = gl_residual(s);
    const double rn = residual_mass_norm(s);
    out.log.push_back({"flow", step, E, rn});
    if (rn < schedule.switchResidual) break;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      GLState trial = s;
      trial.u = s.u - dt * r;
      const double Et = gl_energy(trial);
      if (Et <= E + 1e-12 * (1.0 + std::abs(E))) {
        s = trial;
        E = Et;
        dt = std::min(dt * 1.2, dtMax);
        accepted = true;
        break;
      }
      dt *= 0.5;
    }
    if (!accepted) break;  // flow stalled; hand over to Newton anyway
  }

  const int V = static_cast<int>(s.u.size());
  const double eps2 = s.params.epsilon * s.params.epsilon;
  double rn = residual_mass_norm(s);
  for (int it = 0; it < schedule.newtonMaxIter && rn > schedule.newtonTol; ++it) {
    out.log.push_back({"newton", it, gl_energy(s), rn});
    // J = eps^2 K2 + M2 ((|u|^2-1) I + 2 u u^T)
    std::vector<Eigen::Triplet<double>> T;
    T.reserve(4 * s.fem->stiffness.nonZeros() + 4 * V);
    for (int k = 0; k < s.fem->stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator jt(s.fem->stiffness, k); jt; ++jt) {
        T.emplace_back(2 * jt.row(), 2 * jt.col(), eps2 * jt.value());
        T.emplace_back(2 * jt.row() + 1, 2 * jt.col() + 1, eps2 * jt.value());
      }
    for (int v = 0; v < V; ++v) {
      const double m = s.fem->lumpedMass[v];
      const double a = s.u[v].real(), b = s.u[v].imag();
      const double p = std::norm(s.u[v]) - 1.0;
      T.emplace_back(2 * v, 2 * v, m * (p + 2.0 * a * a));
      T.emplace_back(2 * v, 2 * v + 1, m * 2.0 * a * b);
      T.emplace_back(2 * v + 1, 2 * v, m * 2.0 * a * b);
      T.emplace_back(2 * v + 1, 2 * v + 1, m * (p + 2.0 * b * b));
    }
    Eigen::SparseMatrix<double> J(2 * V, 2 * V);
    J.setFromTriplets(T.begin(), T.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    if (lu.info() != Eigen::Success) break;
    const VectorXd delta = lu.solve(-gl_residual_weak(s));
    if (!delta.allFinite()) break;

    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      GLState trial = s;
      trial.u = s.u + alpha * from_flat(delta.eval());
      const double rt = residual_mass_norm(trial);
      if (rt < rn * (1.0 - 1e-4 * alpha) || rt < schedule.newtonTol) {
        s = trial;
        rn = rt;
        accepted = true;
        break;
      }
      if (!schedule.lineSearch) break;
      alpha *= 0.5;
    }
    if (!accepted) break;
  }

  out.state = s;
  out.finalResidual = residual_mass_norm(s);
  out.converged = out.finalResidual <= schedule.newtonTol;
  out.log.push_back({"newton", -1, gl_energy(s), out.finalResidual});
  return out;
}

}  // namespace stab::gl
