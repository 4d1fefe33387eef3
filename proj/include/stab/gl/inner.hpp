#pragma once

#include <functional>

#include "stab/geometry/fields.hpp"
#include "stab/gl/gl.hpp"

namespace stab::gl {

/// First inner variation dE(u)(X) = -int e_eps(u) Div X - <nabla_{grad u} X, grad u>.
/// Gradient terms use one-point (barycenter) face quadrature, potential terms
/// the lumped vertex rule.
double gl_inner_first(const GLState& s, const geom::FieldJet& jet);

/// Full second inner variation along X (curvature terms specialized to S^2).
double gl_inner_second_general(const GLState& s, const geom::FieldJet& jet);

/// Second inner variation at a critical point along the conformal field of a
/// unit xi, in the reduced form valid on S^n (here n = 2).
double gl_inner_second_critical(const GLState& s, const geom::Vec3& xi);

/// <grad field, X> as a vertex field, via vertex-projected gradients.
VectorXcd directional_derivative(const geom::TriMesh& mesh, const geom::FemOperators& fem,
                                 const VectorXcd& field, const std::vector<geom::Vec3>& Xvertex);

/// Gap of the inner/outer comparison
///   d2E(X, X) - [ d2E(nabla_X u, nabla_X u) + dE(nabla_X nabla_X u) ],
/// which vanishes in the continuum for any smooth u.
double prop_inner_outer_gap(const GLState& s, const geom::FieldJet& jet);

/// Vertex samples of an analytic field.
GLState sampled_state(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                      const std::function<Complex(const geom::Vec3&)>& fn);

/// E_eps of the vertex-sampled pullback u(conformal_flow(x, xi, t)).
double flowed_energy(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                     const std::function<Complex(const geom::Vec3&)>& fn, const geom::Vec3& xi,
                     double t);

}  // namespace stab::gl
