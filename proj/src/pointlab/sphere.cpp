#include "stab/pointlab/sphere.hpp"

#include <cmath>

#include "stab/core/rng.hpp"
#include "stab/core/util.hpp"
#include "stab/geometry/fields.hpp"

namespace stab::pointlab {

double sphere_curvature(const VectorXd& X, const VectorXd& Y, const VectorXd& Z,
                        const VectorXd& W) {
  return Y.dot(Z) * X.dot(W) - X.dot(Z) * Y.dot(W);
}

PointFrame random_point_frame(int n, uint64_t seed) {
  require(n >= 2, "random_point_frame: n >= 2 required");
  Rng rng(seed);
  PointFrame pf;
  pf.n = n;
  pf.seed = seed;
  VectorXd x = rng.normal_vector(n + 1);
  while (x.norm() < 1e-8) x = rng.normal_vector(n + 1);
  pf.x = x / x.norm();
  pf.frame = geom::tangent_basis(pf.x);
  pf.curvature = sphere_curvature;

  pf.data.eEps = std::abs(rng.normal()) + 0.1;
  pf.data.gradU = rng.normal_matrix(n, 2);
  MatrixXd F = rng.normal_matrix(n, n);
  pf.data.F = 0.5 * (F - F.transpose()).eval();
  pf.data.Du.resize(n);
  for (int i = 0; i < n; ++i) pf.data.Du[i] = Complex(rng.normal(), rng.normal());
  pf.data.epsilon = 0.2 + rng.uniform();
  return pf;
}

void validate_frame(const PointFrame& pf) {
  const int n = pf.n;
  const MatrixXd gram = pf.frame.transpose() * pf.frame;
  require((gram - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-14,
          "PointFrame: frame not orthonormal");
  require(pf.frame.transpose().cwiseAbs().maxCoeff() < 2.0, "PointFrame: frame malformed");
  require((pf.data.F + pf.data.F.transpose()).cwiseAbs().maxCoeff() == 0.0,
          "PointFrame: F not exactly antisymmetric");
  Rng rng(pf.seed ^ 0xabcdef);
  for (int t = 0; t < 8; ++t) {
    VectorXd a = pf.frame * rng.normal_vector(n);
    VectorXd b = pf.frame * rng.normal_vector(n);
    VectorXd c = pf.frame * rng.normal_vector(n);
    VectorXd d = pf.frame * rng.normal_vector(n);
    const double r1 = pf.curvature(a, b, c, d);
    require(std::abs(r1 + pf.curvature(b, a, c, d)) <= 1e-10 * (1.0 + std::abs(r1)),
            "PointFrame: curvature not antisymmetric in the first pair");
    require(std::abs(r1 - pf.curvature(c, d, a, b)) <= 1e-10 * (1.0 + std::abs(r1)),
            "PointFrame: curvature lacks pair symmetry");
  }
}

namespace {

// Conformal-field data at the frame's base point, in frame components.
struct XiData {
  double f = 0.0;
  VectorXd X;  // n components
};

XiData conformal_data(const PointFrame& pf, const VectorXd& xi) {
  XiData d;
  d.f = pf.x.dot(xi);
  // <X_xi, e_i> = <xi, e_i> for tangent e_i
  d.X = pf.frame.transpose() * xi;
  return d;
}

}  // namespace

double gl_conformal_integrand(const PointFrame& pf, const VectorXd& xi) {
  const int n = pf.n;
  const XiData cd = conformal_data(pf, xi);
  const double f = cd.f;
  const MatrixXd A = -f * MatrixXd::Identity(n, n);       // nabla X in the frame
  const MatrixXd L = -2.0 * f * MatrixXd::Identity(n, n); // L_X g
  const double div = A.trace();

  // Ric(X, X) and R(p, X, X, p) via the curvature callback on ambient vectors
  const VectorXd Xamb = xi - f * pf.x;
  double ric = 0.0;
  for (int i = 0; i < n; ++i)
    ric += pf.curvature(pf.frame.col(i), Xamb, Xamb, pf.frame.col(i));

  const double bracket = div * div - ric - (A * A).trace();
  double gradTerms = 0.0, lieTerm = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const VectorXd p = pf.data.gradU.col(alpha);  // frame components
    const VectorXd pAmb = pf.frame * p;
    const double gAg = p.dot(A * p);
    const double curv = pf.curvature(pAmb, Xamb, Xamb, pAmb);
    gradTerms += 2.0 * gAg * div - curv + (A * p).squaredNorm();
    lieTerm += (L * p).squaredNorm();
  }
  return pf.data.eEps * bracket - gradTerms + lieTerm;
}

double ymh_conformal_integrand(const PointFrame& pf, const VectorXd& xi) {
  const int n = pf.n;
  const XiData cd = conformal_data(pf, xi);
  const double f = cd.f;
  const MatrixXd A = -f * MatrixXd::Identity(n, n);
  const MatrixXd L = -2.0 * f * MatrixXd::Identity(n, n);
  const double div = A.trace();
  const VectorXd Xamb = xi - f * pf.x;

  // P_ij = eps^2 F_ik F_jk + Re(Du_i conj(Du_j))
  const double eps2 = pf.data.epsilon * pf.data.epsilon;
  MatrixXd P = eps2 * (pf.data.F * pf.data.F.transpose());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      P(i, j) += std::real(pf.data.Du[i] * std::conj(pf.data.Du[j]));

  double ric = 0.0;
  for (int i = 0; i < n; ++i)
    ric += pf.curvature(pf.frame.col(i), Xamb, Xamb, pf.frame.col(i));
  const double t1 = pf.data.eEps * (div * div - ric - (A * A).trace());

  double t2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t2 += A(i, j) * P(i, j);
  t2 *= -4.0 * div;

  double t3 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double rij =
          pf.curvature(pf.frame.col(i), Xamb, Xamb, pf.frame.col(j));
      t3 += (rij - A.row(i).dot(A.row(j))) * P(i, j);
    }
  t3 *= 2.0;

  double t4 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t4 += L(i, j) * L(k, l) * pf.data.F(i, k) * pf.data.F(j, l);
  t4 *= eps2;

  double t5 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t5 += (L.row(i).dot(L.row(j))) * P(i, j);
  t5 *= 2.0;
  return t1 + t2 + t3 + t4 + t5;
}

TraceReport sphere_gl_trace(int n, int samples, uint64_t seed) {
  require(n >= 2, "sphere_gl_trace: n >= 2 required");
  TraceReport rep;
  rep.perSample.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    PointFrame pf = random_point_frame(n, seed + 1000003ull * s);
    double sum = 0.0;
    for (int axis = 0; axis <= n; ++axis)
      sum += gl_conformal_integrand(pf, VectorXd::Unit(n + 1, axis));
    const double grad2 = pf.data.gradU.squaredNorm();
    const double dev = std::abs(sum + (n - 2) * grad2);
    const double scale = 1.0 + grad2 + pf.data.eEps;
    rep.perSample.push_back(dev / scale);
    if (dev / scale > rep.maxAbsDeviation) {
      rep.maxAbsDeviation = dev / scale;
      rep.scale = scale;
    }
  }
  return rep;
}

TraceReport sphere_ymh_trace(int n, int samples, uint64_t seed) {
  require(n >= 2, "sphere_ymh_trace: n >= 2 required");
  TraceReport rep;
  rep.perSample.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    PointFrame pf = random_point_frame(n, seed + 2000003ull * s);
    double sum = 0.0;
    for (int axis = 0; axis <= n; ++axis)
      sum += ymh_conformal_integrand(pf, VectorXd::Unit(n + 1, axis));
    const double eps2 = pf.data.epsilon * pf.data.epsilon;
    const double F2 = 0.5 * pf.data.F.squaredNorm();
    const double Du2 = pf.data.Du.squaredNorm();
    const double target = 4.0 * (4.0 - n) * eps2 * F2 + 2.0 * (2.0 - n) * Du2;
    const double dev = std::abs(sum - target);
    const double scale = 1.0 + pf.data.eEps + eps2 * F2 + Du2;
    rep.perSample.push_back(dev / scale);
    if (dev / scale > rep.maxAbsDeviation) {
      rep.maxAbsDeviation = dev / scale;
      rep.scale = scale;
    }
  }
  return rep;
}

}  // namespace stab::pointlab
