#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "stab/geometry/mesh.hpp"

namespace stab::geom {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Analytic jet of an ambient vector field on S^n: value, covariant
/// derivative, convection term, divergence, Lie derivative of the metric,
/// and second covariant derivative. All callbacks take/return ambient
/// (n+1)-dimensional quantities; matrix callbacks act on tangent vectors.
struct FieldJet {
  enum class Kind { conformal, rotation, combination };
  Kind kind = Kind::conformal;
  int n = 2;  // sphere dimension

  std::function<VectorXd(const VectorXd&)> X;
  std::function<MatrixXd(const VectorXd&)> gradX;    // v -> nabla_v X
  std::function<VectorXd(const VectorXd&)> nablaXX;  // nabla_X X
  std::function<double(const VectorXd&)> divX;
  std::function<MatrixXd(const VectorXd&)> lieG;     // (L_X g)(v, w) = v' lieG w
  // hessX(x, v, w) = nabla^2_{v,w} X for tangent v, w
  std::function<VectorXd(const VectorXd&, const VectorXd&, const VectorXd&)> hessX;

  double div_nabla_xx(const VectorXd& x) const;                     // Div(nabla_X X)
  VectorXd grad_nabla_xx(const VectorXd& x, const VectorXd& v) const;  // nabla_v(nabla_X X)
};

/// Gradient field of the linear height function f_xi = <x, xi>:
/// X(x) = xi - f_xi(x) x, nabla X = -f_xi Id, Div X = -n f_xi,
/// L_X g = -2 f_xi g.
FieldJet conformal_field_jet(const VectorXd& xi, int n);

/// Killing field X(x) = a x x on S^2 (ambient dimension 3 only).
FieldJet rotation_field_jet(const Vec3& a);

FieldJet combine_jets(const std::vector<std::pair<double, FieldJet>>& parts);

/// Orthonormal basis of the tangent space at x (columns), deterministic.
MatrixXd tangent_basis(const VectorXd& x);

/// Closed-form flow of the conformal field X_xi through x at time t.
/// Fixed points x = +-xi are handled exactly.
VectorXd conformal_flow(const VectorXd& x, const VectorXd& xi, double t);

/// Rotation flow about axis a by angle |a| t (Rodrigues).
Vec3 rotation_flow(const Vec3& x, const Vec3& a, double t);

/// Locates points on the sphere triangulation by walking from a seed face;
/// ties on edges resolve to the lowest face index.
class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh) : mesh_(&mesh) {}
  // Returns the containing face and barycentric weights; throws on failure.
  int locate(const Vec3& p, int seedFace, std::array<double, 3>& weights) const;

 private:
  bool cone_coords(int f, const Vec3& p, std::array<double, 3>& lam) const;
  const TriMesh* mesh_;
};

/// (pullback u)(x) = u(flow(x)) by barycentric interpolation. Columns of u
/// are pulled back independently.
Eigen::MatrixXd pullback_field(const TriMesh& mesh, const Eigen::MatrixXd& u,
                               const std::function<Vec3(const Vec3&)>& flow);

}  // namespace stab::geom
