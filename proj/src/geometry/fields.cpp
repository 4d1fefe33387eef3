#include "stab/geometry/fields.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>

#include "stab/core/util.hpp"

namespace stab::geom {

double FieldJet::div_nabla_xx(const VectorXd& x) const {
  const MatrixXd tb = tangent_basis(x);
  const VectorXd Xx = X(x);
  const MatrixXd A = gradX(x);
  double s = 0.0;
  for (int i = 0; i < tb.cols(); ++i) {
    const VectorXd e = tb.col(i);
    s += e.dot(hessX(x, e, Xx) + A * (A * e));
  }
  return s;
}

VectorXd FieldJet::grad_nabla_xx(const VectorXd& x, const VectorXd& v) const {
  const MatrixXd A = gradX(x);
  return hessX(x, v, X(x)) + A * (A * v);
}

FieldJet conformal_field_jet(const VectorXd& xi, int n) {
  FieldJet jet;
  jet.kind = FieldJet::Kind::conformal;
  jet.n = n;
  const int d = static_cast<int>(xi.size());
  jet.X = [xi](const VectorXd& x) -> VectorXd { return xi - x.dot(xi) * x; };
  jet.gradX = [xi, d](const VectorXd& x) -> MatrixXd {
    return -x.dot(xi) * (MatrixXd::Identity(d, d) - x * x.transpose());
  };
  jet.nablaXX = [xi](const VectorXd& x) -> VectorXd {
    const double f = x.dot(xi);
    return -f * (xi - f * x);
  };
  jet.divX = [xi, n](const VectorXd& x) { return -static_cast<double>(n) * x.dot(xi); };
  jet.lieG = [xi, d](const VectorXd& x) -> MatrixXd {
    return -2.0 * x.dot(xi) * (MatrixXd::Identity(d, d) - x * x.transpose());
  };
  jet.hessX = [xi](const VectorXd& x, const VectorXd& v, const VectorXd& w) -> VectorXd {
    return -v.dot(xi - x.dot(xi) * x) * w;
  };
  return jet;
}

FieldJet rotation_field_jet(const Vec3& a) {
  FieldJet jet;
  jet.kind = FieldJet::Kind::rotation;
  jet.n = 2;
  Vec3 av = a;
  auto proj = [](const VectorXd& x, const VectorXd& w) -> VectorXd { return w - w.dot(x) * x; };
  jet.X = [av](const VectorXd& x) -> VectorXd { return av.cross(Vec3(x)); };
  jet.gradX = [av, proj](const VectorXd& x) -> MatrixXd {
    MatrixXd A(3, 3);
    for (int j = 0; j < 3; ++j) {
      Vec3 ej = Vec3::Unit(j);
      A.col(j) = proj(x, av.cross(ej));
    }
    // columns currently give nabla_{e_j} X for ambient e_j; restrict to
    // tangent action by right-projecting
    return A * (MatrixXd::Identity(3, 3) - x * x.transpose());
  };
  jet.nablaXX = [av](const VectorXd& x) -> VectorXd {
    const double f = av.dot(x);
    return f * (VectorXd(av) - f * x);
  };
  jet.divX = [](const VectorXd&) { return 0.0; };
  jet.lieG = [](const VectorXd&) -> MatrixXd { return MatrixXd::Zero(3, 3); };
  jet.hessX = [av](const VectorXd& x, const VectorXd& v, const VectorXd& w) -> VectorXd {
    // nabla^2_{v,w} X = R_{v,X} w for Killing X, with constant curvature one
    const Vec3 Xx = av.cross(Vec3(x));
    return Xx.dot(w) * v - v.dot(w) * VectorXd(Xx);
  };
  return jet;
}

FieldJet combine_jets(const std::vector<std::pair<double, FieldJet>>& parts) {
  require(!parts.empty(), "combine_jets: empty combination");
  const int n = parts.front().second.n;
  for (const auto& p : parts)
    require(p.second.n == n, "combine_jets: mixed sphere dimensions");
  FieldJet jet;
  jet.kind = FieldJet::Kind::combination;
  jet.n = n;
  auto ps = parts;
  jet.X = [ps](const VectorXd& x) -> VectorXd {
    VectorXd s = ps.front().first * ps.front().second.X(x);
    for (size_t k = 1; k < ps.size(); ++k) s += ps[k].first * ps[k].second.X(x);
    return s;
  };
  jet.gradX = [ps](const VectorXd& x) -> MatrixXd {
    MatrixXd s = ps.front().first * ps.front().second.gradX(x);
    for (size_t k = 1; k < ps.size(); ++k) s += ps[k].first * ps[k].second.gradX(x);
    return s;
  };
  jet.divX = [ps](const VectorXd& x) {
    double s = 0.0;
    for (const auto& p : ps) s += p.first * p.second.divX(x);
    return s;
  };
  jet.lieG = [ps](const VectorXd& x) -> MatrixXd {
    MatrixXd s = ps.front().first * ps.front().second.lieG(x);
    for (size_t k = 1; k < ps.size(); ++k) s += ps[k].first * ps[k].second.lieG(x);
    return s;
  };
  jet.hessX = [ps](const VectorXd& x, const VectorXd& v, const VectorXd& w) -> VectorXd {
    VectorXd s = ps.front().first * ps.front().second.hessX(x, v, w);
    for (size_t k = 1; k < ps.size(); ++k) s += ps[k].first * ps[k].second.hessX(x, v, w);
    return s;
  };
  // nabla_X X is quadratic in X; recover it from the combined first-order jet
  auto gX = jet.gradX;
  auto vX = jet.X;
  jet.nablaXX = [gX, vX](const VectorXd& x) -> VectorXd { return gX(x) * vX(x); };
  return jet;
}

MatrixXd tangent_basis(const VectorXd& x) {
  const int d = static_cast<int>(x.size());
  // Householder reflection mapping e_1 to x; remaining columns span x-perp.
  VectorXd w = x;
  w[0] += (x[0] >= 0.0 ? 1.0 : -1.0) * x.norm();
  const double wn2 = w.squaredNorm();
  MatrixXd H = MatrixXd::Identity(d, d) - (2.0 / wn2) * (w * w.transpose());
  MatrixXd tb = H.rightCols(d - 1);
  if (x[0] >= 0.0) tb = -tb;  // fix handedness deterministically
  return tb;
}

VectorXd conformal_flow(const VectorXd& x, const VectorXd& xi, double t) {
  const double f = std::max(-1.0, std::min(1.0, x.dot(xi)));
  const VectorXd perp = x - f * xi;
  const double s = perp.norm();
  if (s < 1e-15) return (f >= 0.0) ? xi : VectorXd(-xi);  // poles are fixed
  const VectorXd v = perp / s;
  // theta' = -sin(theta)  =>  tan(theta/2) decays as e^{-t}
  const double halfTan = s / (1.0 + f);  // tan(theta/2), stable near theta = 0
  const double thetaT = 2.0 * std::atan(std::exp(-t) * halfTan);
  VectorXd y = std::cos(thetaT) * xi + std::sin(thetaT) * v;
  return y / y.norm();
}

Vec3 rotation_flow(const Vec3& x, const Vec3& a, double t) {
  const double angle = a.norm() * t;
  if (a.norm() < 1e-300) return x;
  return Eigen::AngleAxisd(angle, a.normalized()) * x;
}

bool PointLocator::cone_coords(int f, const Vec3& p, std::array<double, 3>& lam) const {
  const auto& tri = mesh_->faces[f];
  Eigen::Matrix3d M;
  M.col(0) = mesh_->vertices[tri[0]];
  M.col(1) = mesh_->vertices[tri[1]];
  M.col(2) = mesh_->vertices[tri[2]];
  const Vec3 l = M.partialPivLu().solve(p);
  lam = {l[0], l[1], l[2]};
  const double tol = -1e-12;
  return lam[0] >= tol && lam[1] >= tol && lam[2] >= tol;
}

int PointLocator::locate(const Vec3& p, int seedFace, std::array<double, 3>& weights) const {
  const int F = mesh_->num_faces();
  int f = (seedFace >= 0 && seedFace < F) ? seedFace : 0;
  std::array<double, 3> lam{};
  int found = -1;
  const int maxSteps = 4 * static_cast<int>(std::sqrt(static_cast<double>(F))) + 64;
  for (int step = 0; step < maxSteps; ++step) {
    if (cone_coords(f, p, lam)) {
      found = f;
      break;
    }
    int worst = 0;
    for (int c = 1; c < 3; ++c)
      if (lam[c] < lam[worst]) worst = c;
    // crossing the side opposite the most negative coordinate: side (worst+1)
    f = mesh_->faceNeighbor[f][(worst + 1) % 3];
  }
  if (found < 0) {
    for (int g = 0; g < F; ++g)
      if (cone_coords(g, p, lam)) {
        found = g;
        break;
      }
  }
  require(found >= 0, "PointLocator: no containing face (inconsistent mesh?)");

  // ties on edges resolve to the lowest containing face index
  bool onEdge = lam[0] < 1e-12 || lam[1] < 1e-12 || lam[2] < 1e-12;
  if (onEdge) {
    int best = found;
    std::array<double, 3> lamBest = lam;
    for (int c = 0; c < 3; ++c) {
      if (lam[c] < 1e-12) {
        int nb = mesh_->faceNeighbor[found][(c + 1) % 3];
        std::array<double, 3> lamNb{};
        if (nb >= 0 && nb < best && cone_coords(nb, p, lamNb)) {
          best = nb;
          lamBest = lamNb;
        }
      }
    }
    found = best;
    lam = lamBest;
  }
  const double sum = lam[0] + lam[1] + lam[2];
  weights = {lam[0] / sum, lam[1] / sum, lam[2] / sum};
  return found;
}

Eigen::MatrixXd pullback_field(const TriMesh& mesh, const Eigen::MatrixXd& u,
                               const std::function<Vec3(const Vec3&)>& flow) {
  require(u.rows() == mesh.num_vertices(), "pullback_field: length mismatch");
  PointLocator loc(mesh);
  Eigen::MatrixXd out(u.rows(), u.cols());
  int seed = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    Vec3 y = flow(mesh.vertices[v]);
    y.normalize();
    std::array<double, 3> w{};
    seed = loc.locate(y, seed, w);
    const auto& tri = mesh.faces[seed];
    for (int j = 0; j < u.cols(); ++j)
      out(v, j) = w[0] * u(tri[0], j) + w[1] * u(tri[1], j) + w[2] * u(tri[2], j);
  }
  return out;
}

}  // namespace stab::geom
