#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <string>
#include <vector>

#include "stab/geometry/mesh.hpp"

namespace stab::geom {

/// Piecewise-linear FEM operators on a TriMesh: consistent + lumped mass,
/// cotangent stiffness, and the per-face constant-gradient maps.
struct FemOperators {
  Eigen::SparseMatrix<double> mass;       // consistent, SPD
  Eigen::VectorXd lumpedMass;             // barycentric vertex areas
  Eigen::SparseMatrix<double> stiffness;  // cotangent weights, PSD; K*1 = 0 exactly
  Eigen::VectorXd cotanEdgeWeight;        // w_e per edge, matches stiffness off-diagonals

  std::vector<std::array<Vec3, 3>> faceGradCoef;  // grad u|_f = sum_c u_c * coef[f][c]
  std::vector<double> faceArea;
  std::vector<Vec3> faceUnitBary;  // normalized face barycenters (quadrature points)
  double totalArea = 0.0;
};

FemOperators assemble_fem(const TriMesh& mesh);

/// Per-face gradient of a PL vertex field; vectors lie in the face plane.
std::vector<Vec3> gradient_field_faces(const TriMesh& mesh, const FemOperators& ops,
                                       const Eigen::VectorXd& u);

/// Area-weighted average of incident face gradients, projected to the vertex
/// tangent plane (normal = the vertex itself).
std::vector<Vec3> gradient_field_vertices(const TriMesh& mesh, const FemOperators& ops,
                                          const Eigen::VectorXd& u);

/// Coordinate-list text export: "row col value" per line.
void write_coo(const Eigen::SparseMatrix<double>& m, const std::string& path);

}  // namespace stab::geom
