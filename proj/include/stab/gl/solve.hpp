#pragma once

#include <string>
#include <vector>

#include "stab/gl/gl.hpp"

namespace stab::gl {

struct GLSolveSchedule {
  int flowSteps = 2000;
  double flowStep = 5e-3;
  double newtonTol = 1e-10;
  int newtonMaxIter = 50;
  bool lineSearch = true;
  double switchResidual = 1e-2;  // flow -> Newton handover
};

struct SolveLogEntry {
  std::string phase;  // "flow" | "newton"
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
};

struct GLSolveResult {
  GLState state;
  std::vector<SolveLogEntry> log;
  bool converged = false;
  double finalResidual = 0.0;
};

/// Gradient flow on E_eps followed by damped Newton on the weak residual.
/// Energy is non-increasing along the flow phase; non-convergence is
/// reported in the result, not thrown.
GLSolveResult gl_solve(const GLState& start, const GLSolveSchedule& schedule);

}  // namespace stab::gl
