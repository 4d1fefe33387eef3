#include "stab/gl/spectrum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

#include "stab/core/util.hpp"
#include "stab/geometry/fem.hpp"
#include "stab/gl/inner.hpp"

namespace stab::gl {

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

SpectrumReport gl_spectrum(const GLState& s, int k, uint64_t seed) {
  require(k >= 1 && k <= s.u.size(), "gl_spectrum: k out of range");
  const SpMat H = gl_hessian_matrix(s);
  const SpMat M = diag_to_sparse(gl_mass2_diag(s));
  EigOptions opts;
  opts.k = k;
  opts.tol = 1e-9;
  opts.seed = seed;
  opts.shift = -1.0 / (s.params.epsilon * s.params.epsilon) - 0.5;
  const EigResult r = smallest_generalized_eigs(H, M, opts);
  SpectrumReport rep;
  rep.eigenvalues = r.values;
  rep.eigenvectors = r.vectors;
  rep.residualNorms = r.residuals;
  rep.converged = r.converged;
  rep.allConverged = r.allConverged;
  require(rep.allConverged, "gl_spectrum: eigensolver did not converge");
  return rep;
}

MorseIndexReport gl_morse_index(const GLState& s, double tol) {
  require(tol > 0.0, "gl_morse_index: tol must be positive");
  const SpMat H = gl_hessian_matrix(s);
  const VectorXd m2 = gl_mass2_diag(s);
  SpMat shifted = H;
  // H + tol M: negative-eigenvalue count of this matrix equals the number of
  // generalized eigenvalues of (H, M) strictly below -tol.
  std::vector<Eigen::Triplet<double>> T;
  for (int i = 0; i < m2.size(); ++i) T.emplace_back(i, i, tol * m2[i]);
  SpMat tolM(m2.size(), m2.size());
  tolM.setFromTriplets(T.begin(), T.end());
  shifted = H + tolM;
  const auto count = ldlt_negative_count(shifted);
  if (count.has_value()) return {*count, true};

  // factorization breakdown: fall back to computing eigenvalues until the
  // tail clears -tol
  int k = 8;
  while (true) {
    SpectrumReport rep = gl_spectrum(s, k);
    int idx = 0;
    for (int i = 0; i < rep.eigenvalues.size(); ++i)
      if (rep.eigenvalues[i] < -tol) ++idx;
    if (rep.eigenvalues[k - 1] >= -tol) return {idx, true};
    if (2 * k > s.u.size()) return {idx, false};
    k *= 2;
  }
}

VectorXcd nabla_X_u(const GLState& s, const std::vector<geom::Vec3>& Xvertex) {
  return directional_derivative(*s.mesh, *s.fem, s.u, Xvertex);
}

InstabilityCertificate gl_instability_certificate(const GLState& s, double tol, uint64_t seed) {
  InstabilityCertificate cert;
  const int V = static_cast<int>(s.u.size());

  // candidate directions v_i = <grad u, X_{e_i}>
  std::vector<VectorXcd> vs;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<geom::Vec3> X(V);
    geom::Vec3 xi = geom::Vec3::Unit(axis);
    for (int v = 0; v < V; ++v) {
      const geom::Vec3& x = s.mesh->vertices[v];
      X[v] = xi - x.dot(xi) * x;
    }
    vs.push_back(nabla_X_u(s, X));
  }

  Eigen::Matrix3d A, B;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const VectorXcd Lvj = gl_hessian_apply(s, vs[j]);
      double a = 0.0, b = 0.0;
      for (int v = 0; v < V; ++v) {
        const double m = s.fem->lumpedMass[v];
        a += m * (vs[i][v].real() * Lvj[v].real() + vs[i][v].imag() * Lvj[v].imag());
        b += m * (vs[i][v].real() * vs[j][v].real() + vs[i][v].imag() * vs[j][v].imag());
      }
      A(i, j) = a;
      B(i, j) = b;
    }
  A = 0.5 * (A + A.transpose()).eval();
  B = 0.5 * (B + B.transpose()).eval();

  // reduce to the non-degenerate part of span{v_i}
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> bsolve(B);
  const double bmax = bsolve.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < 3; ++i)
    if (bsolve.eigenvalues()[i] > 1e-10 * std::max(bmax, 1e-300)) keep.push_back(i);
  if (!keep.empty() && bmax > 0.0) {
    Eigen::MatrixXd W(3, keep.size());
    for (size_t c = 0; c < keep.size(); ++c)
      W.col(c) = bsolve.eigenvectors().col(keep[c]) / std::sqrt(bsolve.eigenvalues()[keep[c]]);
    const Eigen::MatrixXd Ar = W.transpose() * A * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ar + Ar.transpose()));
    const double q = es.eigenvalues()[0];
    if (q < -tol) {
      const Eigen::VectorXd c = W * es.eigenvectors().col(0);
      VectorXcd dir = VectorXcd::Zero(V);
      for (int i = 0; i < 3; ++i) dir += c[i] * vs[i];
      cert.found = true;
      cert.viaSpan = true;
      cert.rayleighQuotient = q;
      cert.direction = dir;
      return cert;
    }
  }

  // fall back to the spectrum
  SpectrumReport rep = gl_spectrum(s, 6, seed);
  cert.spectrumConsulted = true;
  cert.lambda1 = rep.eigenvalues[0];
  if (rep.eigenvalues[0] < -tol) {
    cert.found = true;
    cert.rayleighQuotient = rep.eigenvalues[0];
    cert.direction = from_flat(rep.eigenvectors.col(0).eval());
  }
  return cert;
}

void write_spectrum_csv(const SpectrumReport& rep, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "write_spectrum_csv: cannot open " + path);
  out.precision(17);
  out << "index,eigenvalue,residualNorm\n";
  for (int i = 0; i < rep.eigenvalues.size(); ++i)
    out << i << "," << rep.eigenvalues[i] << "," << rep.residualNorms[i] << "\n";
}

}  // namespace stab::gl
