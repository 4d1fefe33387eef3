#pragma once

#include "stab/geometry/mesh.hpp"
#include "stab/ymh/model.hpp"

namespace stab::pointlab {

/// Quadrature of the YMH conformal-stability integrand for a lattice state
/// and ambient direction xi (per-face reconstruction of F, Du and the
/// energy density; n = 2). Nonnegative up to discretization error for
/// stable critical states.
double sphere_per_xi_stability_integrand(const ymh::YMHState& state, const geom::Vec3& xi);

/// eps^2 int |F|^2 of the lattice state (for the xi-summed comparison
/// against 8 eps^2 int |F|^2).
double lattice_curvature_energy(const ymh::YMHState& state);

}  // namespace stab::pointlab
