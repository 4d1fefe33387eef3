#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace stab {

using SpMat = Eigen::SparseMatrix<double>;

struct EigOptions {
  int k = 6;
  int block = 0;        // 0 = automatic
  int maxIter = 500;
  double tol = 1e-9;    // on |Hv - lambda Mv|_2 / |Mv|_2
  double shift = 0.0;   // initial guess; lowered automatically until below lambda_min
  uint64_t seed = 0x5eed;
};

struct EigResult {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXd vectors;   // M-orthonormal columns
  Eigen::VectorXd residuals;
  std::vector<bool> converged;
  bool allConverged = false;
  int iterations = 0;
  double shiftUsed = 0.0;
};

/// k smallest eigenpairs of the symmetric pencil (H, M), M SPD, by
/// shift-invert subspace iteration. The shift is certified below the
/// smallest eigenvalue via LDLT inertia before iterating. An optional
/// projector restricts the iteration to an M-orthogonal subspace (it must
/// commute with the pencil on that subspace, e.g. a gauge-orbit complement).
EigResult smallest_generalized_eigs(const SpMat& H, const SpMat& M, const EigOptions& opts,
                                    const std::function<void(Eigen::MatrixXd&)>& projector = {});

/// Number of negative pivots of the LDLT factorization of A (= number of
/// negative eigenvalues for symmetric A). Empty if the unpivoted
/// factorization broke down.
std::optional<int> ldlt_negative_count(const SpMat& A);

/// Power-iteration estimate of max |lambda| of (H, M) with diagonal M.
double pencil_norm_estimate(const SpMat& H, const Eigen::VectorXd& Mdiag, int iters = 40,
                            uint64_t seed = 0x5eed);

}  // namespace stab
