#pragma once

#include <Eigen/Core>
#include <string>

#include "stab/geometry/fem.hpp"
#include "stab/geometry/mesh.hpp"

namespace stab::ymh {

using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Degree-d U(1) bundle on the mesh realized by edge phases. The stored
/// phase of edge (i, j), i < j, transports fiber values from i to j; phases
/// are kept in (-pi, pi], and every wrapped plaquette flux must stay
/// strictly inside (-pi, pi) for the degree to be well defined.
struct LatticeBundle {
  const geom::TriMesh* mesh = nullptr;
  const geom::FemOperators* fem = nullptr;
  VectorXd edgePhases;
};

/// Section + connection + coupling: the lattice abelian Higgs state.
struct YMHState {
  LatticeBundle bundle;
  VectorXcd u;
  double epsilon = 0.3;
};

struct GaugeFunction {
  VectorXd theta;  // per vertex
};

/// Edge phases with plaquette fluxes 2 pi d area_f / (total area), built by a
/// spanning-tree gauge (tree phases zero) with per-face corrections along the
/// dual tree. Throws if the target flux of some face would reach pi.
LatticeBundle bundle_init(const geom::TriMesh& mesh, const geom::FemOperators& fem, int degree);

/// Wrapped plaquette fluxes, one per face.
VectorXd plaquette_fluxes(const LatticeBundle& bundle);

/// (1/2pi) sum of wrapped fluxes; throws if farther than 1e-9 from an integer.
int ymh_degree(const LatticeBundle& bundle);

YMHState make_state(const LatticeBundle& bundle, const VectorXcd& u, double epsilon);

/// u_i -> e^{i theta_i} u_i, theta_e -> theta_e + theta_j - theta_i.
YMHState gauge_transform(const YMHState& s, const GaugeFunction& phi);

/// Weighted Coulomb gauge: applies the gauge function minimizing
/// sum_e w_e theta_e^2 over the orbit (mean-zero vertex potential).
YMHState coulomb_project(const YMHState& s);

// State file: JSON {meshLevel, epsilon, degree, edgePhases[], re[], im[]}.
void write_state_json(const YMHState& s, const std::string& path);
YMHState read_state_json(const geom::TriMesh& mesh, const geom::FemOperators& fem,
                         const std::string& path);

}  // namespace stab::ymh
