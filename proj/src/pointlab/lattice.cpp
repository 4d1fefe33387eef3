#include "stab/pointlab/lattice.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "stab/core/util.hpp"
#include "stab/ymh/bogomolny.hpp"

namespace stab::pointlab {

using geom::Vec3;
using Complex = std::complex<double>;

double sphere_per_xi_stability_integrand(const ymh::YMHState& s, const Vec3& xi) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const int n = 2;
  const double eps2 = s.epsilon * s.epsilon;
  const Eigen::VectorXd flux = ymh::plaquette_fluxes(s.bundle);

  double acc = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) {
    const Vec3 p = fem.faceUnitBary[f];
    const double fx = p.dot(xi);
    const double f2 = fx * fx;

    // face frame
    const Vec3 nhat = m.face_normal(f);
    const Vec3 e1 = (m.vertices[m.faces[f][1]] - m.vertices[m.faces[f][0]]).normalized();
    const Vec3 e2 = nhat.cross(e1);

    const Vec3 Xamb = xi - fx * p;
    const Eigen::Vector2d X(Xamb.dot(e1), Xamb.dot(e2));

    const double starF = flux[f] / fem.faceArea[f];
    Eigen::Matrix2d F;
    F << 0.0, starF, -starF, 0.0;

    Vec3 dRe, dIm;
    ymh::face_covariant_gradient(s, f, &dRe, &dIm);
    const Complex Du1(dRe.dot(e1), dIm.dot(e1));
    const Complex Du2(dRe.dot(e2), dIm.dot(e2));
    const Complex Du[2] = {Du1, Du2};

    double pot = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double w = 1.0 - std::norm(s.u[m.faces[f][c]]);
      pot += w * w / (4.0 * eps2);
    }
    pot /= 3.0;
    const double eEps = eps2 * starF * starF + std::norm(Du1) + std::norm(Du2) + pot;

    // P_ij = eps^2 F_ik F_jk + Re(Du_i conj(Du_j))
    Eigen::Matrix2d P = eps2 * (F * F.transpose());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) += std::real(Du[i] * std::conj(Du[j]));

    const double div = -n * fx;
    const double X2 = X.squaredNorm();
    const double t1 = eEps * (div * div - (n - 1) * X2 - n * f2);
    const double t2 = -4.0 * div * (-fx) * P.trace();
    double t3 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double rij = X2 * (i == j ? 1.0 : 0.0) - X[i] * X[j];
        t3 += (rij - f2 * (i == j ? 1.0 : 0.0)) * P(i, j);
      }
    t3 *= 2.0;
    const double t4 = 4.0 * eps2 * f2 * F.squaredNorm();
    const double t5 = 8.0 * f2 * P.trace();
    acc += fem.faceArea[f] * (t1 + t2 + t3 + t4 + t5);
  }
  return acc;
}

double lattice_curvature_energy(const ymh::YMHState& s) {
  const auto& fem = *s.bundle.fem;
  const Eigen::VectorXd flux = ymh::plaquette_fluxes(s.bundle);
  double acc = 0.0;
  for (int f = 0; f < flux.size(); ++f)
    acc += s.epsilon * s.epsilon * flux[f] * flux[f] / fem.faceArea[f];
  return acc;
}

}  // namespace stab::pointlab
