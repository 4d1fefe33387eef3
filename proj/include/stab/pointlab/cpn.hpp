#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace stab::pointlab {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Value and first/second coordinate derivatives of a Killing field at the
/// chart origin of CP^n (real coordinates x_1..x_n, y_1..y_n).
struct KillingJet {
  VectorXd value;            // 2n
  MatrixXd d1;               // d1(i, k) = d_i W^k
  std::vector<MatrixXd> d2;  // d2[k](i, j) = d_i d_j W^k
};

/// Frame data of CP^n at the chart origin: Fubini-Study metric, numeric
/// curvature, the su(n+1) Killing fields orthonormalized under the form
/// (A, B) = 2 tr(A B^*), and the isotropy/transvection split.
struct CpnFrame {
  int n = 1;                 // complex dimension
  int q = 3;                 // (n+1)^2 - 1
  MatrixXd G, Ginv;          // metric at 0
  MatrixXd J;                // complex structure, J dx_k = dy_k
  std::vector<MatrixXcd> su; // Killing-orthonormal su(n+1) basis
  std::vector<KillingJet> jets;
  std::vector<int> pIdx, fIdx;  // transvection / isotropy sub-bases
  std::vector<double> R4;       // R(d_k, d_l, d_j, d_i), flattened
  std::vector<double> dGam;     // d_i Gamma^m_{jk} at 0, flattened

  double R(int k, int l, int j, int i) const;
  double Rvec(const VectorXd& X, const VectorXd& Y, const VectorXd& Z, const VectorXd& W) const;
  double dGamma(int i, int j, int k, int m) const;  // d_i Gamma^m_{jk}

  /// Fubini-Study metric in the chart at real coordinates xy.
  MatrixXd metric(const VectorXd& xy) const;
  KillingJet jv(int k) const;  // jet of J V_k
};

/// Builds the frame by numerically differentiating the isometry flows
/// t -> chart(e^{tA} lift(z)) and the chart metric. Throws (naming the
/// failing quantity) if an invariant breaks: orthonormality, the p/f split,
/// Ric = (n+1)/2 g, |d_k| = 2 at 0, or the Kahler curvature symmetries.
CpnFrame cpn_frame_build(int n);

/// max over samples of |sum_k <nabla_X JV_k, Y><nabla_W JV_k, Z> - <R_{X,JY} JW, Z>|
/// on unit tangent 4-tuples.
double cpn_lemma_prelim_check(const CpnFrame& fr, int samples, uint64_t seed);

struct CpnTraceReport {
  double q1sum = 0.0;    // max |sum_k Q1(J V_k)| / scale
  double q2q3sum = 0.0;  // max |sum_k (-Q2 + Q3)(J V_k)| / scale
  double scale = 1.0;
};

/// Pointwise sums of the second-variation blocks over the rotated basis.
CpnTraceReport cpn_trace_check(const CpnFrame& fr, int samples, uint64_t seed);

/// Covariant Hessian of the first eigenfunction f_w (w = diag(1, -I/n))
/// at the chart origin, numerically differentiated.
MatrixXd cpn_eigenfunction_hessian(int n);

/// Numeric Laplacian of f_w at the origin (expected -(n+1) f_w(0)).
double cpn_eigenfunction_laplacian(int n);

/// Frame with the Killing basis replaced by an orthogonal recombination.
CpnFrame rotate_basis(const CpnFrame& fr, const MatrixXd& O);

/// max commutator component violating [p,p] c f, [p,f] c p, [f,f] c f.
double cpn_bracket_deviation(const CpnFrame& fr);

double cpn_ricci_deviation(const CpnFrame& fr);
double cpn_kahler_deviation(const CpnFrame& fr, int samples, uint64_t seed);
/// max |(V_i, V_j)_K - <V_i(0), V_j(0)>_FS| over the transvection basis.
double cpn_killing_vs_fs_deviation(const CpnFrame& fr);

}  // namespace stab::pointlab
