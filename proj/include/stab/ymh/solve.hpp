#pragma once

#include <string>
#include <vector>

#include "stab/ymh/model.hpp"

namespace stab::ymh {

struct YMHSchedule {
  int maxIter = 60000;
  double gradTol = 1e-8;        // Euclidean norm of the flat gradient
  double polishFrom = 1e-4;     // hand over to the gradient-norm polish here
  double initStep = 1e-2;
  int projectEvery = 0;         // periodic Coulomb re-gauging; 0 disables
  double fluxGuard = 0.999;     // reject steps pushing any |Phi_f| >= guard * pi
};

struct YMHSolveLogEntry {
  int iter = 0;
  double energy = 0.0;
  double gradNorm = 0.0;
};

struct YMHSolveResult {
  YMHState state;
  std::vector<YMHSolveLogEntry> log;
  bool converged = false;
  double finalGradNorm = 0.0;
  int iterations = 0;
};

/// Preconditioned conjugate-gradient descent on the discrete energy followed
/// by a gauge-projected Barzilai-Borwein polish on the gradient norm; steps
/// that would push a plaquette flux to the wrap branch are rejected, so the
/// degree is preserved exactly.
YMHSolveResult ymh_solve(const YMHState& start, const YMHSchedule& schedule);

}  // namespace stab::ymh
