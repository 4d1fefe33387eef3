#pragma once

#include "stab/core/eigs.hpp"
#include "stab/ymh/model.hpp"

namespace stab::ymh {

struct YMHSpectrumReport {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // flat layout, metric-orthonormal
  Eigen::VectorXd residualNorms;
  std::vector<bool> converged;
  bool allConverged = false;
  double hessianNormEstimate = 0.0;
};

/// k smallest eigenvalues of the exact discrete Hessian restricted to the
/// metric-orthogonal complement of the gauge-orbit tangent space
/// {(i phi u, d phi)}. Intended for critical states, where gauge directions
/// are exact zero modes.
YMHSpectrumReport ymh_spectrum_gauge_fixed(const YMHState& s, int k, uint64_t seed = 0x5eed);

/// Rayleigh quotient of the Hessian at a flat direction.
double hessian_quotient(const YMHState& s, const VectorXd& direction);

}  // namespace stab::ymh
