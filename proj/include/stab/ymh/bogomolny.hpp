#pragma once

#include <string>

#include "stab/ymh/model.hpp"

namespace stab::ymh {

struct BogomolnyReport {
  double energy = 0.0;
  int degree = 0;
  double defect = 0.0;  // energy - 2 pi |degree|
  VectorXd residA;      // per face: (1/2) |Du -+ i * Du|^2
  VectorXd residB;      // per face: |eps *F -+ (1 - |u|^2) / (2 eps)|^2
  double residualSum = 0.0;  // sum (A + B) * area
};

/// Splits the energy against the 2 pi |degree| topological bound; the sign
/// branch follows the sign of the degree. Face residuals reconstruct the
/// self-duality defects from PL data in a per-face trivialization.
BogomolnyReport bogomolny_defect(const YMHState& s);

/// Covariant PL gradient on face f: corner values transported to the frame
/// of the first corner, then differentiated. Real and imaginary parts are
/// returned as ambient vectors in the face plane.
void face_covariant_gradient(const YMHState& s, int f, geom::Vec3* dRe, geom::Vec3* dIm);

void write_face_residuals_csv(const BogomolnyReport& rep, const geom::FemOperators& fem,
                              const std::string& path);

}  // namespace stab::ymh
