#include "stab/ymh/bogomolny.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>

#include "stab/core/util.hpp"

namespace stab::ymh {

using geom::Vec3;
using Complex = std::complex<double>;

void face_covariant_gradient(const YMHState& s, int f, Vec3* dRe, Vec3* dIm) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const auto& tri = m.faces[f];
  // corner values pulled back to the frame of tri[0]; the stored phase of
  // edge (i, j), i < j, transports i -> j
  Complex w[3];
  w[0] = s.u[tri[0]];
  for (int c : {1, 2}) {
    const int side = (c == 1) ? 0 : 2;  // sides: (0->1), (1->2), (2->0)
    const int e = m.faceEdge[f][side];
    const double sgn = (m.edges[e][0] == tri[0]) ? 1.0 : -1.0;
    w[c] = std::polar(1.0, -sgn * s.bundle.edgePhases[e]) * s.u[tri[c]];
  }
  Vec3 re = Vec3::Zero(), im = Vec3::Zero();
  for (int c = 0; c < 3; ++c) {
    re += w[c].real() * fem.faceGradCoef[f][c];
    im += w[c].imag() * fem.faceGradCoef[f][c];
  }
  *dRe = re;
  *dIm = im;
}

BogomolnyReport bogomolny_defect(const YMHState& s) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const int F = m.num_faces();
  BogomolnyReport rep;
  rep.energy = ymh_energy(s);
  rep.degree = ymh_degree(s.bundle);
  rep.defect = rep.energy - kTwoPi * std::abs(rep.degree);
  rep.residA.resize(F);
  rep.residB.resize(F);
  const double sgn = (rep.degree >= 0) ? 1.0 : -1.0;
  const double eps = s.epsilon;
  const VectorXd flux = plaquette_fluxes(s.bundle);

  double sum = 0.0;
  for (int f = 0; f < F; ++f) {
    Vec3 dRe, dIm;
    face_covariant_gradient(s, f, &dRe, &dIm);
    const Vec3 nhat = m.face_normal(f);
    const Vec3 jRe = nhat.cross(dRe);
    const Vec3 jIm = nhat.cross(dIm);
    // Du -+ i * Du = (dRe +- J dIm) + i (dIm -+ J dRe)
    const Vec3 v1 = dRe + sgn * jIm;
    const Vec3 v2 = dIm - sgn * jRe;
    rep.residA[f] = 0.5 * (v1.squaredNorm() + v2.squaredNorm());

    const double starF = flux[f] / fem.faceArea[f];
    double usq = 0.0;
    for (int c = 0; c < 3; ++c) usq += std::norm(s.u[m.faces[f][c]]);
    usq /= 3.0;
    const double b = eps * starF - sgn * (1.0 - usq) / (2.0 * eps);
    rep.residB[f] = b * b;
    sum += (rep.residA[f] + rep.residB[f]) * fem.faceArea[f];
  }
  rep.residualSum = sum;
  return rep;
}

void write_face_residuals_csv(const BogomolnyReport& rep, const geom::FemOperators& fem,
                              const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "write_face_residuals_csv: cannot open " + path);
  out.precision(17);
  out << "faceIndex,residA,residB,area\n";
  for (int f = 0; f < rep.residA.size(); ++f)
    out << f << "," << rep.residA[f] << "," << rep.residB[f] << "," << fem.faceArea[f] << "\n";
}

}  // namespace stab::ymh
