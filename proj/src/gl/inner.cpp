#include "stab/gl/inner.hpp"

#include <cmath>

#include "stab/core/util.hpp"

namespace stab::gl {

using geom::Vec3;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct FaceGradients {
  std::vector<Vec3> re, im;
};

// PL face gradients projected to the tangent plane at the quadrature point;
// the projection keeps the pointwise conformal trace identities exact.
FaceGradients face_gradients(const GLState& s) {
  FaceGradients g{geom::gradient_field_faces(*s.mesh, *s.fem, s.u.real()),
                  geom::gradient_field_faces(*s.mesh, *s.fem, s.u.imag())};
  for (int f = 0; f < s.mesh->num_faces(); ++f) {
    const Vec3& p = s.fem->faceUnitBary[f];
    g.re[f] -= g.re[f].dot(p) * p;
    g.im[f] -= g.im[f].dot(p) * p;
  }
  return g;
}

double vertex_potential(const GLState& s, int v) {
  const double w = 1.0 - std::norm(s.u[v]);
  return w * w / (4.0 * s.params.epsilon * s.params.epsilon);
}

}  // namespace

double gl_inner_first(const GLState& s, const geom::FieldJet& jet) {
  const auto g = face_gradients(s);
  double acc = 0.0;
  for (int f = 0; f < s.mesh->num_faces(); ++f) {
    const VectorXd p = s.fem->faceUnitBary[f];
    const double div = jet.divX(p);
    const MatrixXd A = jet.gradX(p);
    const VectorXd gr = g.re[f], gi = g.im[f];
    const double egrad = 0.5 * (gr.squaredNorm() + gi.squaredNorm());
    const double gAg = gr.dot(A * gr) + gi.dot(A * gi);
    acc -= s.fem->faceArea[f] * (egrad * div - gAg);
  }
  for (int v = 0; v < s.mesh->num_vertices(); ++v) {
    const VectorXd x = s.mesh->vertices[v];
    acc -= s.fem->lumpedMass[v] * vertex_potential(s, v) * jet.divX(x);
  }
  return acc;
}

double gl_inner_second_general(const GLState& s, const geom::FieldJet& jet) {
  require(jet.n == 2, "gl_inner_second_general: mesh quadrature assumes S^2 jets");
  const auto g = face_gradients(s);
  double acc = 0.0;
  for (int f = 0; f < s.mesh->num_faces(); ++f) {
    const VectorXd p = s.fem->faceUnitBary[f];
    const VectorXd X = jet.X(p);
    const MatrixXd A = jet.gradX(p);
    const MatrixXd L = jet.lieG(p);
    const double div = jet.divX(p);
    const double X2 = X.squaredNorm();
    const double trA2 = (A * A).trace();
    const double bracket = div * div - X2 - trA2 + jet.div_nabla_xx(p);

    const VectorXd gs[2] = {g.re[f], g.im[f]};
    const double egrad = 0.5 * (gs[0].squaredNorm() + gs[1].squaredNorm());
    double gradTerms = 0.0, lieTerm = 0.0;
    for (const VectorXd& ga : gs) {
      const double gAg = ga.dot(A * ga);
      const double curv = ga.squaredNorm() * X2 - std::pow(ga.dot(X), 2);
      gradTerms += 2.0 * gAg * div - curv + (A * ga).squaredNorm() +
                   jet.grad_nabla_xx(p, ga).dot(ga);
      lieTerm += (L * ga).squaredNorm();
    }
    acc += s.fem->faceArea[f] * (egrad * bracket - gradTerms + lieTerm);
  }
  for (int v = 0; v < s.mesh->num_vertices(); ++v) {
    const VectorXd x = s.mesh->vertices[v];
    const VectorXd X = jet.X(x);
    const MatrixXd A = jet.gradX(x);
    const double div = jet.divX(x);
    const double bracket =
        div * div - X.squaredNorm() - (A * A).trace() + jet.div_nabla_xx(x);
    acc += s.fem->lumpedMass[v] * vertex_potential(s, v) * bracket;
  }
  return acc;
}

double gl_inner_second_critical(const GLState& s, const Vec3& xi) {
  require(std::abs(xi.norm() - 1.0) <= 1e-10, "gl_inner_second_critical: xi must be a unit vector");
  const int n = 2;
  const auto g = face_gradients(s);
  double acc = 0.0;
  for (int f = 0; f < s.mesh->num_faces(); ++f) {
    const Vec3 p = s.fem->faceUnitBary[f];
    const double fx = p.dot(xi);
    const double f2 = fx * fx;
    const Vec3 X = xi - fx * p;
    const double bracket = n * n * f2 - (n - 1) * (1.0 - f2) - n * f2;

    const Vec3 gs[2] = {g.re[f], g.im[f]};
    const double egrad = 0.5 * (gs[0].squaredNorm() + gs[1].squaredNorm());
    const double gradNorm2 = 2.0 * egrad;
    double inner2 = 0.0;
    for (const Vec3& ga : gs) inner2 += std::pow(ga.dot(X), 2);
    const double term2 = 2.0 * n * f2 * gradNorm2 - (1.0 - f2) * gradNorm2 + inner2 +
                         f2 * gradNorm2;
    const double term3 = 4.0 * f2 * gradNorm2;
    acc += s.fem->faceArea[f] * (egrad * bracket - term2 + term3);
  }
  for (int v = 0; v < s.mesh->num_vertices(); ++v) {
    const double fx = s.mesh->vertices[v].dot(xi);
    const double f2 = fx * fx;
    const double bracket = n * n * f2 - (n - 1) * (1.0 - f2) - n * f2;
    acc += s.fem->lumpedMass[v] * vertex_potential(s, v) * bracket;
  }
  return acc;
}

VectorXcd directional_derivative(const geom::TriMesh& mesh, const geom::FemOperators& fem,
                                 const VectorXcd& field, const std::vector<Vec3>& Xvertex) {
  const auto gre = geom::gradient_field_vertices(mesh, fem, field.real());
  const auto gim = geom::gradient_field_vertices(mesh, fem, field.imag());
  VectorXcd out(field.size());
  for (int v = 0; v < field.size(); ++v)
    out[v] = Complex(gre[v].dot(Xvertex[v]), gim[v].dot(Xvertex[v]));
  return out;
}

double prop_inner_outer_gap(const GLState& s, const geom::FieldJet& jet) {
  const int V = s.mesh->num_vertices();
  std::vector<Vec3> Xv(V);
  for (int v = 0; v < V; ++v) Xv[v] = jet.X(VectorXd(s.mesh->vertices[v]));
  const VectorXcd vX = directional_derivative(*s.mesh, *s.fem, s.u, Xv);
  const VectorXcd wXX = directional_derivative(*s.mesh, *s.fem, vX, Xv);
  const double inner = gl_inner_second_general(s, jet);
  const double outer = gl_outer_second_variation(s, vX) + gl_outer_first_variation(s, wXX);
  return inner - outer;
}

GLState sampled_state(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                      const std::function<Complex(const Vec3&)>& fn) {
  VectorXcd u(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) u[v] = fn(mesh.vertices[v]);
  return make_state(mesh, fem, epsilon, u);
}

double flowed_energy(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                     const std::function<Complex(const Vec3&)>& fn, const Vec3& xi, double t) {
  VectorXcd u(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const VectorXd y = geom::conformal_flow(VectorXd(mesh.vertices[v]), VectorXd(xi), t);
    u[v] = fn(Vec3(y));
  }
  return gl_energy(make_state(mesh, fem, epsilon, u));
}

}  // namespace stab::gl
