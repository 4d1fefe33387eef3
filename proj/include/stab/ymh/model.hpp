#pragma once

#include <Eigen/SparseCore>

#include "stab/ymh/bundle.hpp"

namespace stab::ymh {

/// eps^2 sum_f Phi_f^2 / area_f + sum_e w_e |u_j - e^{i theta_e} u_i|^2
/// + sum_v m_v (1 - |u_v|^2)^2 / (4 eps^2); exactly gauge invariant.
double ymh_energy(const YMHState& s);

/// Exact partial derivatives of the discrete energy.
struct YMHGradient {
  VectorXcd du;      // with respect to (Re u, Im u), encoded complex
  VectorXd dtheta;   // with respect to edge phases
};
YMHGradient ymh_gradient(const YMHState& s);

// flat layout: (re_0, im_0, ..., re_{V-1}, im_{V-1}, theta_0, ..., theta_{E-1})
VectorXd state_to_flat(const YMHState& s);
YMHState flat_to_state(const YMHState& like, const VectorXd& x);
VectorXd gradient_to_flat(const YMHGradient& g);

/// Exact second derivative of the discrete energy at s, in the flat layout.
Eigen::SparseMatrix<double> ymh_hessian_matrix(const YMHState& s);

/// Natural block inner product: lumped mass on the section, cotangent edge
/// weights on the connection.
VectorXd ymh_metric_diag(const YMHState& s);

/// Gauge-orbit tangent (i phi u, d phi) in the flat layout.
VectorXd gauge_direction(const YMHState& s, const VectorXd& phi);

double max_section_abs(const YMHState& s);

}  // namespace stab::ymh
