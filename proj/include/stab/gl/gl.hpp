#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <complex>
#include <string>
#include <vector>

#include "stab/geometry/fem.hpp"
#include "stab/geometry/mesh.hpp"

namespace stab::gl {

using Complex = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct GLParams {
  double epsilon = 0.5;
};

/// Complex scalar field on mesh vertices together with the coupling epsilon.
struct GLState {
  const geom::TriMesh* mesh = nullptr;
  const geom::FemOperators* fem = nullptr;
  GLParams params;
  VectorXcd u;
};

GLState make_state(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                   const VectorXcd& u);

// interleaved real layout (re_0, im_0, re_1, im_1, ...)
VectorXd to_flat(const VectorXcd& u);
VectorXcd from_flat(const VectorXd& x);

/// E_eps(u) = sum_f area |grad u|^2 / 2 + sum_v m_v (1 - |u|^2)^2 / (4 eps^2).
double gl_energy(const GLState& s);

/// Mass-inverse-applied weak residual:
/// <r, v>_mass = eps^2 (K u) . v + M ((|u|^2 - 1) u) . v, zero exactly at
/// discrete critical points.
VectorXcd gl_residual(const GLState& s);

/// Weak residual vector R = eps^2 K2 u + M2 ((|u|^2 - 1) u) in flat layout.
VectorXd gl_residual_weak(const GLState& s);

double residual_mass_norm(const GLState& s);

/// L_u v = -Delta_h v + (|u|^2 - 1) v / eps^2 + 2 (u . v) u / eps^2.
VectorXcd gl_hessian_apply(const GLState& s, const VectorXcd& v);

/// First outer variation dE(u)(v) = int <grad u, grad v> + (|u|^2-1)(u.v)/eps^2.
double gl_outer_first_variation(const GLState& s, const VectorXcd& v);

/// Second outer variation = <L_u v, v>_mass.
double gl_outer_second_variation(const GLState& s, const VectorXcd& v);

/// Weak-form Hessian H = K2 + M2 D(u)/eps^2 on 2V interleaved unknowns;
/// <L_u v, w>_mass = flat(v)' H flat(w).
Eigen::SparseMatrix<double> gl_hessian_matrix(const GLState& s);

/// Lumped mass on 2V interleaved unknowns.
VectorXd gl_mass2_diag(const GLState& s);

double state_max_abs(const GLState& s);

// Snapshot file: JSON {meshLevel, epsilon, realParts[], imagParts[]}.
void write_state_json(const GLState& s, const std::string& path);
VectorXcd read_state_json(const std::string& path, int* meshLevel, double* epsilon);

}  // namespace stab::gl
