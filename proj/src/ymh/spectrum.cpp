#include "stab/ymh/spectrum.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <memory>
#include <vector>

#include "stab/core/util.hpp"

namespace stab::ymh {

namespace {

SpMat diag_to_sparse(const VectorXd& d) {
  SpMat M(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> T;
  T.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) T.emplace_back(i, i, d[i]);
  M.setFromTriplets(T.begin(), T.end());
  return M;
}

}  // namespace

YMHSpectrumReport ymh_spectrum_gauge_fixed(const YMHState& s, int k, uint64_t seed) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const int V = m.num_vertices(), E = m.num_edges();
  require(k >= 1 && k <= V, "ymh_spectrum_gauge_fixed: k out of range");

  const SpMat H = ymh_hessian_matrix(s);
  const VectorXd Bd = ymh_metric_diag(s);
  const SpMat B = diag_to_sparse(Bd);

  // Gram matrix of gauge directions: S = M_{|u|^2} + L_w (the cotangent
  // stiffness); grounded at vertex 0 when u vanishes identically.
  SpMat S = fem.stiffness;
  {
    std::vector<Eigen::Triplet<double>> T;
    double usum = 0.0;
    for (int v = 0; v < V; ++v) {
      const double mv = fem.lumpedMass[v] * std::norm(s.u[v]);
      usum += mv;
      if (mv > 0.0) T.emplace_back(v, v, mv);
    }
    if (usum <= 1e-12 * fem.totalArea) T.emplace_back(0, 0, 1.0);
    SpMat add(V, V);
    add.setFromTriplets(T.begin(), T.end());
    S = S + add;
  }
  auto Ssolver = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(S);
  require(Ssolver->info() == Eigen::Success, "ymh_spectrum_gauge_fixed: Gram factorization failed");

  // B-orthogonal projector onto the complement of the gauge orbit:
  // P x = x - G S^{-1} G^T B x.
  YMHState sc = s;
  auto GT_B = [&m, &sc, &Bd, V, E](const VectorXd& x) {
    VectorXd r = VectorXd::Zero(V);
    for (int v = 0; v < V; ++v) {
      const auto u = sc.u[v];
      r[v] += Bd[2 * v] * (-u.imag()) * x[2 * v] + Bd[2 * v + 1] * u.real() * x[2 * v + 1];
    }
    for (int e = 0; e < E; ++e) {
      const double we = Bd[2 * V + e] * x[2 * V + e];
      r[m.edges[e][1]] += we;
      r[m.edges[e][0]] -= we;
    }
    return r;
  };
  auto projector = [&m, &sc, Ssolver, GT_B, V, E](Eigen::MatrixXd& X) {
    for (int c = 0; c < X.cols(); ++c) {
      const VectorXd phi = Ssolver->solve(GT_B(X.col(c)));
      X.col(c) -= gauge_direction(sc, phi);
    }
  };

  EigOptions opts;
  opts.k = k;
  opts.tol = 1e-9;
  opts.maxIter = 800;
  opts.seed = seed;
  // shallow shift: the interesting spectrum clusters near zero, and the
  // certification loop lowers the shift when the state is unstable
  opts.shift = -0.5;
  const EigResult r = smallest_generalized_eigs(H, B, opts, projector);

  YMHSpectrumReport rep;
  rep.eigenvalues = r.values;
  rep.eigenvectors = r.vectors;
  rep.residualNorms = r.residuals;
  rep.converged = r.converged;
  rep.allConverged = r.allConverged;
  rep.hessianNormEstimate = pencil_norm_estimate(H, Bd, 40, seed);
  require(rep.allConverged, "ymh_spectrum_gauge_fixed: eigensolver did not converge");
  return rep;
}

double hessian_quotient(const YMHState& s, const VectorXd& direction) {
  const SpMat H = ymh_hessian_matrix(s);
  const VectorXd Bd = ymh_metric_diag(s);
  const double num = direction.dot(H * direction);
  const double den = direction.dot(Bd.cwiseProduct(direction));
  require(den > 0.0, "hessian_quotient: zero direction");
  return num / den;
}

}  // namespace stab::ymh
