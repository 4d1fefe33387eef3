#include "stab/gl/oracle.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "stab/geometry/fields.hpp"

namespace stab::gl {

using geom::Vec3;

namespace {

// Dunavant degree-4 rule on the reference triangle (weights sum to one).
struct QuadPoint {
  double a, b, c, w;
};
const QuadPoint kRule[6] = {
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
};

}  // namespace

double spherical_energy_quadrature(const geom::TriMesh& mesh, double epsilon,
                                   const std::function<Complex(const Vec3&)>& fn) {
  const double eps2 = epsilon * epsilon;
  const double step = 1e-5;
  double total = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Vec3& a = mesh.vertices[mesh.faces[f][0]];
    const Vec3& b = mesh.vertices[mesh.faces[f][1]];
    const Vec3& c = mesh.vertices[mesh.faces[f][2]];
    const double areaFlat = 0.5 * (b - a).cross(c - a).norm();
    const Vec3 nhat = (b - a).cross(c - a).normalized();
    const double planeDist = a.dot(nhat);
    double acc = 0.0;
    for (const auto& qp : kRule) {
      const Vec3 x = qp.a * a + qp.b * b + qp.c * c;
      const double r = x.norm();
      const Vec3 p = x / r;
      const double jac = planeDist / (r * r * r);

      const Eigen::MatrixXd tb = geom::tangent_basis(Eigen::VectorXd(p));
      double grad2 = 0.0;
      for (int k = 0; k < 2; ++k) {
        const Vec3 e = tb.col(k);
        const Complex dw =
            (fn(Vec3((p + step * e).normalized())) - fn(Vec3((p - step * e).normalized()))) /
            (2.0 * step);
        grad2 += std::norm(dw);
      }
      const double pot = 1.0 - std::norm(fn(p));
      acc += qp.w * jac * (0.5 * grad2 + pot * pot / (4.0 * eps2));
    }
    total += areaFlat * acc;
  }
  return total;
}

double flowed_energy_quadrature(const geom::TriMesh& mesh, double epsilon,
                                const std::function<Complex(const Vec3&)>& fn, const Vec3& xi,
                                double t) {
  auto flowed = [&fn, &xi, t](const Vec3& x) {
    return fn(Vec3(geom::conformal_flow(Eigen::VectorXd(x), Eigen::VectorXd(xi), t)));
  };
  return spherical_energy_quadrature(mesh, epsilon, flowed);
}

}  // namespace stab::gl
