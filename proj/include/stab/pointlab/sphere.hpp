#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace stab::pointlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

/// Curvature callback R(X, Y, Z, W) = <R_{X,Y} Z, W> on frame vectors.
using CurvatureFn =
    std::function<double(const VectorXd&, const VectorXd&, const VectorXd&, const VectorXd&)>;

/// A single tangent space of S^n with an orthonormal frame, the constant
/// curvature oracle, and random field data for pointwise identity checks.
struct PointFrame {
  int n = 2;
  VectorXd x;       // base point in R^{n+1}
  MatrixXd frame;   // (n+1) x n, orthonormal tangent columns
  CurvatureFn curvature;

  struct FieldData {
    double eEps = 0.0;    // energy density stand-in
    MatrixXd gradU;       // n x 2 (real/imaginary gradient components)
    MatrixXd F;           // n x n antisymmetric
    Eigen::VectorXcd Du;  // n complex
    Complex u{0.0, 0.0};
    double epsilon = 1.0;
  } data;
  uint64_t seed = 0;
};

/// Frame at a seeded random point with seeded Gaussian field data.
PointFrame random_point_frame(int n, uint64_t seed);

/// Throws on the first violated PointFrame invariant.
void validate_frame(const PointFrame& pf);

/// Constant curvature one: R_{X,Y} Z = <Y,Z> X - <X,Z> Y.
double sphere_curvature(const VectorXd& X, const VectorXd& Y, const VectorXd& Z,
                        const VectorXd& W);

/// Second-inner-variation integrand at a critical point along the conformal
/// field of xi (ambient basis vector), evaluated from the frame data via the
/// general curvature contractions.
double gl_conformal_integrand(const PointFrame& pf, const VectorXd& xi);

/// The YMH stability integrand of the same kind (five curvature/field terms).
double ymh_conformal_integrand(const PointFrame& pf, const VectorXd& xi);

struct TraceReport {
  double maxAbsDeviation = 0.0;
  std::vector<double> perSample;
  double scale = 1.0;  // of the worst sample
};

/// max_s | sum_xi gl integrand + (n-2) |grad u|^2 |, xi over the standard
/// basis of R^{n+1}; the sum telescopes to -(n-2) |grad u|^2 pointwise.
TraceReport sphere_gl_trace(int n, int samples, uint64_t seed);

/// max_s | sum_xi ymh integrand - [4(4-n) eps^2 |F|^2 + 2(2-n) |Du|^2] |.
TraceReport sphere_ymh_trace(int n, int samples, uint64_t seed);

}  // namespace stab::pointlab
