#pragma once

#include <functional>

#include "stab/geometry/mesh.hpp"
#include "stab/gl/gl.hpp"

namespace stab::gl {

/// Brute-force spherical quadrature of E_eps for an analytic field: per-face
/// degree-4 rule mapped radially to the sphere with the exact projection
/// Jacobian, tangential derivatives by small central differences of the
/// callback. Independent of the PL-FEM energy path; used as an oracle.
double spherical_energy_quadrature(const geom::TriMesh& mesh, double epsilon,
                                   const std::function<Complex(const geom::Vec3&)>& fn);

/// Same quadrature applied to x -> fn(conformal_flow(x, xi, t)).
double flowed_energy_quadrature(const geom::TriMesh& mesh, double epsilon,
                                const std::function<Complex(const geom::Vec3&)>& fn,
                                const geom::Vec3& xi, double t);

}  // namespace stab::gl
