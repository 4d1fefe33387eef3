#include "stab/core/eigs.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>

#include "stab/core/rng.hpp"
#include "stab/core/util.hpp"

namespace stab {

namespace {

// Shifted solver: LDLT when it succeeds, SparseLU otherwise.
class ShiftedSolver {
 public:
  bool factor(const SpMat& A) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
    ldlt_->compute(A);
    if (ldlt_->info() == Eigen::Success && ldlt_->vectorD().allFinite() &&
        (ldlt_->vectorD().array().abs() > 0.0).all()) {
      useLU_ = false;
      return true;
    }
    ldlt_.reset();
    lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_->compute(A);
    useLU_ = true;
    return lu_->info() == Eigen::Success;
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (useLU_) return lu_->solve(b);
    return ldlt_->solve(b);
  }
  std::optional<int> negative_count() const {
    if (useLU_ || !ldlt_) return std::nullopt;
    const auto& d = ldlt_->vectorD();
    int neg = 0;
    for (int i = 0; i < d.size(); ++i)
      if (d[i] < 0.0) ++neg;
    return neg;
  }

 private:
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
  bool useLU_ = false;
};

// M-orthonormalize the columns of X in place (two MGS passes).
void m_orthonormalize(Eigen::MatrixXd& X, const SpMat& M, Rng& rng) {
  const int n = static_cast<int>(X.rows());
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < X.cols(); ++j) {
      Eigen::VectorXd v = X.col(j);
      for (int i = 0; i < j; ++i) {
        const double c = X.col(i).dot(M * v);
        v -= c * X.col(i);
      }
      double nv = std::sqrt(v.dot(M * v));
      if (nv < 1e-13) {
        v = rng.normal_vector(n);
        for (int i = 0; i < j; ++i) v -= (X.col(i).dot(M * v)) * X.col(i);
        nv = std::sqrt(v.dot(M * v));
      }
      X.col(j) = v / nv;
    }
  }
}

}  // namespace

EigResult smallest_generalized_eigs(const SpMat& H, const SpMat& M, const EigOptions& opts,
                                    const std::function<void(Eigen::MatrixXd&)>& projector) {
  const int n = static_cast<int>(H.rows());
  require(M.rows() == n && H.cols() == n, "eigs: dimension mismatch");
  require(opts.k >= 1 && opts.k <= n, "eigs: bad k");
  const int b = std::min(n, opts.block > 0 ? std::max(opts.block, opts.k)
                                           : std::max(opts.k + 6, 4));

  // Certify shift below the smallest eigenvalue: inertia of H - sigma M must
  // have no negative pivots.
  double sigma = opts.shift;
  ShiftedSolver solver;
  bool ok = false;
  for (int attempt = 0; attempt < 12; ++attempt) {
    SpMat A = H - sigma * M;
    if (solver.factor(A)) {
      auto neg = solver.negative_count();
      if (neg.has_value() && *neg == 0) {
        ok = true;
        break;
      }
      if (!neg.has_value()) {
        // LU fallback cannot certify; accept only if the caller's shift was
        // already conservative (keep lowering otherwise).
        if (attempt >= 6) {
          ok = true;
          break;
        }
      }
    }
    sigma = 2.0 * sigma - std::max(1.0, std::abs(sigma));
  }
  require(ok, "eigs: could not certify a shift below the spectrum");

  Rng rng(opts.seed);
  Eigen::MatrixXd X = rng.normal_matrix(n, b);
  if (projector) projector(X);
  m_orthonormalize(X, M, rng);

  EigResult res;
  res.shiftUsed = sigma;
  Eigen::VectorXd ritz(b);
  for (int iter = 1; iter <= opts.maxIter; ++iter) {
    Eigen::MatrixXd Y(n, b);
    for (int j = 0; j < b; ++j) Y.col(j) = solver.solve(M * X.col(j));
    if (projector) projector(Y);
    m_orthonormalize(Y, M, rng);

    Eigen::MatrixXd HY = H * Y;
    Eigen::MatrixXd Hr = Y.transpose() * HY;
    Eigen::MatrixXd Br = Y.transpose() * (M * Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (Hr + Hr.transpose()), 0.5 * (Br + Br.transpose()));
    require(es.info() == Eigen::Success, "eigs: dense Rayleigh-Ritz failed");
    X = Y * es.eigenvectors();
    ritz = es.eigenvalues();
    res.iterations = iter;

    bool done = true;
    res.residuals.resize(opts.k);
    for (int j = 0; j < opts.k; ++j) {
      const Eigen::VectorXd Mx = M * X.col(j);
      const double rn = (H * X.col(j) - ritz[j] * Mx).norm() / Mx.norm();
      res.residuals[j] = rn;
      if (rn > opts.tol) done = false;
    }
    if (done) break;
  }

  res.values = ritz.head(opts.k);
  res.vectors = X.leftCols(opts.k);
  res.converged.assign(opts.k, false);
  res.allConverged = true;
  for (int j = 0; j < opts.k; ++j) {
    res.converged[j] = res.residuals[j] <= opts.tol;
    if (!res.converged[j]) res.allConverged = false;
  }
  return res;
}

std::optional<int> ldlt_negative_count(const SpMat& A) {
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const auto& d = ldlt.vectorD();
  if (!d.allFinite()) return std::nullopt;
  int neg = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) return std::nullopt;
    if (d[i] < 0.0) ++neg;
  }
  return neg;
}

double pencil_norm_estimate(const SpMat& H, const Eigen::VectorXd& Mdiag, int iters,
                            uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd z = rng.normal_vector(static_cast<int>(H.rows()));
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd w = (H * z).cwiseQuotient(Mdiag);
    const double nw = std::sqrt(w.cwiseProduct(Mdiag).dot(w));
    if (nw == 0.0) return 0.0;
    z = w / nw;
    lam = nw;
  }
  return lam;
}

}  // namespace stab
