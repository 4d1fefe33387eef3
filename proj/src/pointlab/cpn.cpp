#include "stab/pointlab/cpn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "stab/core/rng.hpp"
#include "stab/core/util.hpp"

namespace stab::pointlab {

using Complex = std::complex<double>;
using Eigen::VectorXcd;

namespace {

// steps: hMetric for the closed-form metric, hT for the flow parameter,
// hZ1/hZ2 for field derivatives. The fields are quadratic in the chart, so
// the z-steps are constrained by the noise of the nested t-difference, not
// by truncation.
constexpr double kHMetric = 1e-4;
constexpr double kHT = 1e-4;
constexpr double kHZ1 = 1e-2;
constexpr double kHZ2 = 2e-2;

VectorXcd to_complex(const VectorXd& xy) {
  const int n = static_cast<int>(xy.size()) / 2;
  VectorXcd z(n);
  for (int k = 0; k < n; ++k) z[k] = Complex(xy[k], xy[n + k]);
  return z;
}

VectorXd to_real(const VectorXcd& z) {
  const int n = static_cast<int>(z.size());
  VectorXd xy(2 * n);
  for (int k = 0; k < n; ++k) {
    xy[k] = z[k].real();
    xy[n + k] = z[k].imag();
  }
  return xy;
}

MatrixXd fs_metric(int n, const VectorXd& xy) {
  const VectorXcd z = to_complex(xy);
  const double r2 = z.squaredNorm();
  MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex v = -std::conj(z[i]) * z[j];
      if (i == j) v += 1.0 + r2;
      h(i, j) = 2.0 / ((1.0 + r2) * (1.0 + r2)) * v;
    }
  MatrixXd G(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = h(i, j).real(), im = h(i, j).imag();
      G(i, j) = 2.0 * re;
      G(n + i, n + j) = 2.0 * re;
      G(i, n + j) = 2.0 * im;
      G(n + i, j) = -2.0 * im;
    }
  return G;
}

// One Richardson level on the central difference with steps h and h/2.
template <typename F>
auto richardson_d1(const F& f, double h) {
  auto d = [&](double hh) { return ((f(hh) - f(-hh)) / (2.0 * hh)).eval(); };
  return ((4.0 * d(h / 2) - d(h)) / 3.0).eval();
}

// Isometry flow z -> chart(e^{tA} lift(z)) and its numeric t-derivative.
class KillingField {
 public:
  KillingField(int n, const MatrixXcd& A) : n_(n) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Complex(0.0, 1.0) * A);
    require(es.info() == Eigen::Success, "cpn: eigendecomposition of su generator failed");
    U_ = es.eigenvectors();
    lam_ = es.eigenvalues();
  }

  VectorXcd flow(double t, const VectorXcd& w) const {
    VectorXcd c = U_.adjoint() * w;
    for (int i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -t * lam_[i]);
    return U_ * c;
  }

  // field value in real chart coordinates
  VectorXd value(const VectorXd& xy) const {
    const VectorXcd z = to_complex(xy);
    VectorXcd w(n_ + 1);
    w[0] = 1.0;
    w.tail(n_) = z;
    w /= std::sqrt(1.0 + z.squaredNorm());
    auto g = [&](double t) -> VectorXcd {
      const VectorXcd wt = flow(t, w);
      return (wt.tail(n_) / wt[0]).eval();
    };
    return to_real(richardson_d1(g, kHT));
  }

 private:
  int n_;
  MatrixXcd U_;
  VectorXd lam_;
};

KillingJet build_jet(int n, const KillingField& kf) {
  const int D = 2 * n;
  KillingJet jet;
  const VectorXd origin = VectorXd::Zero(D);
  jet.value = kf.value(origin);
  jet.d1.resize(D, D);
  for (int i = 0; i < D; ++i) {
    auto f = [&](double h) { return kf.value(h * VectorXd::Unit(D, i)); };
    jet.d1.row(i) = richardson_d1(f, kHZ1).transpose();
  }
  jet.d2.assign(D, MatrixXd::Zero(D, D));
  const double h = kHZ2;
  for (int i = 0; i < D; ++i) {
    const VectorXd diag =
        (kf.value(h * VectorXd::Unit(D, i)) - 2.0 * jet.value + kf.value(-h * VectorXd::Unit(D, i))) /
        (h * h);
    for (int k = 0; k < D; ++k) jet.d2[k](i, i) = diag[k];
    for (int j = i + 1; j < D; ++j) {
      const VectorXd ei = VectorXd::Unit(D, i), ej = VectorXd::Unit(D, j);
      const VectorXd mixed = (kf.value(h * (ei + ej)) - kf.value(h * (ei - ej)) -
                              kf.value(h * (ej - ei)) + kf.value(-h * (ei + ej))) /
                             (4.0 * h * h);
      for (int k = 0; k < D; ++k) {
        jet.d2[k](i, j) = mixed[k];
        jet.d2[k](j, i) = mixed[k];
      }
    }
  }
  return jet;
}

std::vector<MatrixXcd> su_basis(int n, std::vector<int>* pIdx, std::vector<int>* fIdx) {
  const int N = n + 1;
  std::vector<MatrixXcd> basis;
  // transvection part: A_b = [[0, -conj(b)^T], [b, 0]] with |b| = 1/2
  for (int k = 0; k < n; ++k) {
    MatrixXcd A = MatrixXcd::Zero(N, N);
    A(0, k + 1) = -0.5;
    A(k + 1, 0) = 0.5;
    pIdx->push_back(static_cast<int>(basis.size()));
    basis.push_back(A);
  }
  for (int k = 0; k < n; ++k) {
    MatrixXcd A = MatrixXcd::Zero(N, N);
    A(0, k + 1) = Complex(0.0, 0.5);
    A(k + 1, 0) = Complex(0.0, 0.5);
    pIdx->push_back(static_cast<int>(basis.size()));
    basis.push_back(A);
  }
  // isotropy part: su(n) in the lower block plus the Cartan directions
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      MatrixXcd A = MatrixXcd::Zero(N, N);
      A(a, b) = 0.5;
      A(b, a) = -0.5;
      fIdx->push_back(static_cast<int>(basis.size()));
      basis.push_back(A);
      MatrixXcd B = MatrixXcd::Zero(N, N);
      B(a, b) = Complex(0.0, 0.5);
      B(b, a) = Complex(0.0, 0.5);
      fIdx->push_back(static_cast<int>(basis.size()));
      basis.push_back(B);
    }
  for (int m = 1; m <= n; ++m) {
    MatrixXcd A = MatrixXcd::Zero(N, N);
    const double c = 1.0 / std::sqrt(2.0 * m * (m + 1.0));
    for (int i = 0; i < m; ++i) A(i, i) = Complex(0.0, c);
    A(m, m) = Complex(0.0, -m * c);
    fIdx->push_back(static_cast<int>(basis.size()));
    basis.push_back(A);
  }
  return basis;
}

double killing_form(const MatrixXcd& A, const MatrixXcd& B) {
  const Complex v = 2.0 * (A * B.adjoint()).trace();
  require(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real())),
          "cpn: Killing form acquired an imaginary part");
  return v.real();
}

}  // namespace

double CpnFrame::R(int k, int l, int j, int i) const {
  const int D = 2 * n;
  return R4[((static_cast<size_t>(k) * D + l) * D + j) * D + i];
}

double CpnFrame::Rvec(const VectorXd& X, const VectorXd& Y, const VectorXd& Z,
                      const VectorXd& W) const {
  const int D = 2 * n;
  double s = 0.0;
  for (int a = 0; a < D; ++a) {
    if (X[a] == 0.0) continue;
    for (int b = 0; b < D; ++b) {
      if (Y[b] == 0.0) continue;
      for (int c = 0; c < D; ++c)
        for (int d = 0; d < D; ++d) s += X[a] * Y[b] * Z[c] * W[d] * R(a, b, c, d);
    }
  }
  return s;
}

double CpnFrame::dGamma(int i, int j, int k, int m) const {
  const int D = 2 * n;
  return dGam[((static_cast<size_t>(i) * D + j) * D + k) * D + m];
}

MatrixXd CpnFrame::metric(const VectorXd& xy) const { return fs_metric(n, xy); }

KillingJet CpnFrame::jv(int k) const {
  const int D = 2 * n;
  const KillingJet& w = jets[k];
  KillingJet out;
  out.value = J * w.value;
  out.d1 = w.d1 * J.transpose();
  out.d2.assign(D, MatrixXd::Zero(D, D));
  for (int comp = 0; comp < D; ++comp)
    for (int mu = 0; mu < D; ++mu)
      if (J(comp, mu) != 0.0) out.d2[comp] += J(comp, mu) * w.d2[mu];
  return out;
}

CpnFrame cpn_frame_build(int n) {
  require(n >= 1 && n <= 3, "cpn_frame_build: 1 <= n <= 3");
  const int D = 2 * n;
  CpnFrame fr;
  fr.n = n;
  fr.q = (n + 1) * (n + 1) - 1;
  fr.G = fs_metric(n, VectorXd::Zero(D));
  require((fr.G - 4.0 * MatrixXd::Identity(D, D)).cwiseAbs().maxCoeff() <= 1e-13,
          "cpn_frame_build: metric at the origin is not 4*I");
  fr.Ginv = fr.G.inverse();
  fr.J = MatrixXd::Zero(D, D);
  for (int k = 0; k < n; ++k) {
    fr.J(k, n + k) = -1.0;
    fr.J(n + k, k) = 1.0;
  }

  // first metric derivatives vanish at the origin (required below)
  for (int i = 0; i < D; ++i) {
    auto f = [&](double h) { return fs_metric(n, (h * VectorXd::Unit(D, i)).eval()); };
    const MatrixXd dG = richardson_d1(f, kHMetric);
    require(dG.cwiseAbs().maxCoeff() <= 1e-9,
            "cpn_frame_build: metric derivative at the origin is not zero");
  }

  // second metric derivatives -> dGamma -> curvature
  std::vector<MatrixXd> d2G(D * D);
  {
    const MatrixXd G0 = fr.G;
    auto second = [&](int i, int j) -> MatrixXd {
      auto stencil = [&](double h) -> MatrixXd {
        if (i == j)
          return (fs_metric(n, (h * VectorXd::Unit(D, i)).eval()) - 2.0 * G0 +
                  fs_metric(n, (-h * VectorXd::Unit(D, i)).eval())) /
                 (h * h);
        const VectorXd ei = VectorXd::Unit(D, i), ej = VectorXd::Unit(D, j);
        return (fs_metric(n, (h * (ei + ej)).eval()) - fs_metric(n, (h * (ei - ej)).eval()) -
                fs_metric(n, (h * (ej - ei)).eval()) + fs_metric(n, (-h * (ei + ej)).eval())) /
               (4.0 * h * h);
      };
      return ((4.0 * stencil(kHMetric / 2) - stencil(kHMetric)) / 3.0).eval();
    };
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) {
        d2G[i * D + j] = second(i, j);
        d2G[j * D + i] = d2G[i * D + j];
      }
  }
  fr.dGam.assign(static_cast<size_t>(D) * D * D * D, 0.0);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int m = 0; m < D; ++m) {
          double s = 0.0;
          for (int l = 0; l < D; ++l)
            s += fr.Ginv(m, l) *
                 (d2G[i * D + j](l, k) + d2G[i * D + k](l, j) - d2G[i * D + l](j, k));
          fr.dGam[((static_cast<size_t>(i) * D + j) * D + k) * D + m] = 0.5 * s;
        }
  fr.R4.assign(static_cast<size_t>(D) * D * D * D, 0.0);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) {
          double s = 0.0;
          for (int m = 0; m < D; ++m)
            s += fr.G(i, m) * (fr.dGamma(k, l, j, m) - fr.dGamma(l, k, j, m));
          fr.R4[((static_cast<size_t>(k) * D + l) * D + j) * D + i] = s;
        }

  // Killing basis and jets
  fr.su = su_basis(n, &fr.pIdx, &fr.fIdx);
  require(static_cast<int>(fr.su.size()) == fr.q, "cpn_frame_build: su basis has wrong size");
  require(static_cast<int>(fr.pIdx.size()) == 2 * n, "cpn_frame_build: dim p != 2n");
  for (int a = 0; a < fr.q; ++a)
    for (int b = 0; b < fr.q; ++b) {
      const double g = killing_form(fr.su[a], fr.su[b]) - (a == b ? 1.0 : 0.0);
      require(std::abs(g) <= 1e-13, "cpn_frame_build: Killing basis is not orthonormal");
    }
  fr.jets.reserve(fr.q);
  for (int a = 0; a < fr.q; ++a) fr.jets.push_back(build_jet(n, KillingField(n, fr.su[a])));

  for (int k : fr.pIdx)
    require(fr.jets[k].d1.cwiseAbs().maxCoeff() <= 1e-8,
            "cpn_frame_build: transvection field has nonzero derivative at the base point");
  for (int k : fr.fIdx)
    require(fr.jets[k].value.cwiseAbs().maxCoeff() <= 1e-12,
            "cpn_frame_build: isotropy field has nonzero value at the base point");
  require(cpn_killing_vs_fs_deviation(fr) <= 1e-8,
          "cpn_frame_build: Killing form does not match the FS inner product on p");
  require(cpn_ricci_deviation(fr) <= 1e-6,
          "cpn_frame_build: Ricci tensor deviates from (n+1)/2 * g");
  require(cpn_kahler_deviation(fr, 32, 0xcafe) <= 1e-6,
          "cpn_frame_build: curvature violates the Kahler symmetries");
  // |d_k| = 2 at the origin under the chosen normalization
  for (int i = 0; i < D; ++i)
    require(std::abs(std::sqrt(fr.G(i, i)) - 2.0) <= 1e-8,
            "cpn_frame_build: coordinate frame norm is not 2");
  return fr;
}

namespace {

struct QParts {
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
};

QParts q_parts(const CpnFrame& fr, const KillingJet& X, const MatrixXd& gradU) {
  const int D = 2 * fr.n;
  QParts out;
  const VectorXd& Xv = X.value;
  const MatrixXd& d1 = X.d1;

  const double div = d1.trace();
  const double trA2 = (d1 * d1).trace();
  double ric = 0.0;
  for (int i = 0; i < D; ++i)
    for (int k = 0; k < D; ++k) {
      if (fr.Ginv(i, k) == 0.0) continue;
      double r = 0.0;
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) r += Xv[a] * Xv[b] * fr.R(i, a, b, k);
      ric += fr.Ginv(i, k) * r;
    }

  // Div(nabla_X X) = [sum_i (nabla_i A)^i_j] X^j + tr(A^2)
  double divNxx = trA2;
  for (int j = 0; j < D; ++j) {
    double s = 0.0;
    for (int i = 0; i < D; ++i) {
      s += X.d2[i](i, j);
      for (int l = 0; l < D; ++l) s += fr.dGamma(i, j, l, i) * Xv[l];
    }
    divNxx += s * Xv[j];
  }
  out.q1 = div * div - ric - trA2 + divNxx;

  for (int alpha = 0; alpha < 2; ++alpha) {
    const VectorXd p = gradU.col(alpha);
    const VectorXd Ap = d1.transpose() * p;  // nabla_p X
    const double pAp = Ap.dot(fr.G * p);
    const double curv = fr.Rvec(p, Xv, Xv, p);
    // nabla_p (nabla_X X)
    VectorXd npx = d1.transpose() * Ap;  // A(A(p))
    for (int k = 0; k < D; ++k) {
      double s = 0.0;
      for (int i = 0; i < D; ++i) {
        if (p[i] == 0.0) continue;
        for (int j = 0; j < D; ++j) {
          double t = X.d2[k](i, j);
          for (int l = 0; l < D; ++l) t += fr.dGamma(i, j, l, k) * Xv[l];
          s += p[i] * t * Xv[j];
        }
      }
      npx[k] += s;
    }
    out.q2 += 2.0 * pAp * div - curv + Ap.dot(fr.G * Ap) + npx.dot(fr.G * p);

    // (L_X g)_{ij} = G_{jk} d1(i,k) + G_{ik} d1(j,k)
    const MatrixXd S = d1 * fr.G;  // S(i,j) = G_{jk} d1(i,k)
    const MatrixXd L = S + S.transpose();
    const VectorXd omega = L * p;
    out.q3 += omega.dot(fr.Ginv * omega);
  }
  return out;
}

}  // namespace

double cpn_lemma_prelim_check(const CpnFrame& fr, int samples, uint64_t seed) {
  const int D = 2 * fr.n;
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    VectorXd v[4];
    for (auto& w : v) {
      w = rng.normal_vector(D);
      w /= std::sqrt(w.dot(fr.G * w));
    }
    double lhs = 0.0;
    for (int k = 0; k < fr.q; ++k) {
      const KillingJet jvk = fr.jv(k);
      const VectorXd nX = jvk.d1.transpose() * v[0];
      const VectorXd nW = jvk.d1.transpose() * v[2];
      lhs += nX.dot(fr.G * v[1]) * nW.dot(fr.G * v[3]);
    }
    const double rhs = fr.Rvec(v[0], fr.J * v[1], fr.J * v[2], v[3]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

CpnTraceReport cpn_trace_check(const CpnFrame& fr, int samples, uint64_t seed) {
  const int D = 2 * fr.n;
  Rng rng(seed);
  CpnTraceReport rep;
  std::vector<KillingJet> jvs;
  jvs.reserve(fr.q);
  for (int k = 0; k < fr.q; ++k) jvs.push_back(fr.jv(k));
  for (int s = 0; s < samples; ++s) {
    const double eEps = std::abs(rng.normal()) + 0.1;
    const MatrixXd gradU = rng.normal_matrix(D, 2);
    double q1 = 0.0, q23 = 0.0;
    for (int k = 0; k < fr.q; ++k) {
      const QParts qp = q_parts(fr, jvs[k], gradU);
      q1 += qp.q1;
      q23 += -qp.q2 + qp.q3;
    }
    double grad2 = 0.0;
    for (int alpha = 0; alpha < 2; ++alpha)
      grad2 += gradU.col(alpha).dot(fr.G * gradU.col(alpha));
    const double scale = 1.0 + eEps + grad2;
    rep.q1sum = std::max(rep.q1sum, std::abs(eEps * q1) / scale);
    rep.q2q3sum = std::max(rep.q2q3sum, std::abs(q23) / scale);
    rep.scale = scale;
  }
  return rep;
}

MatrixXd cpn_eigenfunction_hessian(int n) {
  require(n >= 1 && n <= 3, "cpn_eigenfunction_hessian: 1 <= n <= 3");
  const int D = 2 * n;
  auto f = [n](const VectorXd& xy) {
    const VectorXcd z = to_complex(xy);
    const double r2 = z.squaredNorm();
    return (1.0 - r2 / n) / (1.0 + r2);
  };
  // coordinate Hessian at the origin (the Christoffel correction vanishes:
  // Gamma(0) = 0 and df(0) = 0, both checked by the caller's tolerances)
  MatrixXd H(D, D);
  auto second = [&](int i, int j) {
    auto stencil = [&](double h) {
      const VectorXd ei = VectorXd::Unit(D, i), ej = VectorXd::Unit(D, j);
      if (i == j)
        return (f(h * ei) - 2.0 * f(VectorXd::Zero(D)) + f(-h * ei)) / (h * h);
      return (f(h * (ei + ej)) - f(h * (ei - ej)) - f(h * (ej - ei)) + f(-h * (ei + ej))) /
             (4.0 * h * h);
    };
    return (4.0 * stencil(kHMetric / 2) - stencil(kHMetric)) / 3.0;
  };
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) {
      H(i, j) = second(i, j);
      H(j, i) = H(i, j);
    }
  return H;
}

double cpn_eigenfunction_laplacian(int n) {
  const MatrixXd H = cpn_eigenfunction_hessian(n);
  const MatrixXd Ginv = fs_metric(n, VectorXd::Zero(2 * n)).inverse();
  return (Ginv * H).trace();
}

CpnFrame rotate_basis(const CpnFrame& fr, const MatrixXd& O) {
  require(O.rows() == fr.q && O.cols() == fr.q, "rotate_basis: dimension mismatch");
  require((O.transpose() * O - MatrixXd::Identity(fr.q, fr.q)).cwiseAbs().maxCoeff() <= 1e-12,
          "rotate_basis: matrix is not orthogonal");
  CpnFrame out = fr;
  const int D = 2 * fr.n;
  for (int i = 0; i < fr.q; ++i) {
    KillingJet jet;
    jet.value = VectorXd::Zero(D);
    jet.d1 = MatrixXd::Zero(D, D);
    jet.d2.assign(D, MatrixXd::Zero(D, D));
    MatrixXcd A = MatrixXcd::Zero(fr.n + 1, fr.n + 1);
    for (int j = 0; j < fr.q; ++j) {
      const double c = O(j, i);
      if (c == 0.0) continue;
      jet.value += c * fr.jets[j].value;
      jet.d1 += c * fr.jets[j].d1;
      for (int k = 0; k < D; ++k) jet.d2[k] += c * fr.jets[j].d2[k];
      A += c * fr.su[j];
    }
    out.jets[i] = jet;
    out.su[i] = A;
  }
  out.pIdx.clear();
  out.fIdx.clear();  // the split is not preserved by a general rotation
  return out;
}

double cpn_bracket_deviation(const CpnFrame& fr) {
  auto in = [](const std::vector<int>& v, int k) {
    for (int x : v)
      if (x == k) return true;
    return false;
  };
  double worst = 0.0;
  for (int a = 0; a < fr.q; ++a)
    for (int b = 0; b < fr.q; ++b) {
      const MatrixXcd C = fr.su[a] * fr.su[b] - fr.su[b] * fr.su[a];
      const bool pa = in(fr.pIdx, a), pb = in(fr.pIdx, b);
      for (int k = 0; k < fr.q; ++k) {
        const double c = killing_form(C, fr.su[k]);
        const bool pk = in(fr.pIdx, k);
        bool allowed;
        if (pa && pb) allowed = !pk;        // [p, p] subset f
        else if (pa != pb) allowed = pk;    // [p, f] subset p
        else allowed = !pk;                 // [f, f] subset f
        if (!allowed) worst = std::max(worst, std::abs(c));
      }
    }
  return worst;
}

double cpn_ricci_deviation(const CpnFrame& fr) {
  const int D = 2 * fr.n;
  MatrixXd ric(D, D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      double s = 0.0;
      for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k)
          if (fr.Ginv(i, k) != 0.0) s += fr.Ginv(i, k) * fr.R(i, a, b, k);
      ric(a, b) = s;
    }
  return (ric - 0.5 * (fr.n + 1) * fr.G).cwiseAbs().maxCoeff();
}

double cpn_kahler_deviation(const CpnFrame& fr, int samples, uint64_t seed) {
  const int D = 2 * fr.n;
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    VectorXd v[4];
    for (auto& w : v) {
      w = rng.normal_vector(D);
      w /= std::sqrt(w.dot(fr.G * w));
    }
    const double r = fr.Rvec(v[0], v[1], v[2], v[3]);
    const double rj = fr.Rvec(fr.J * v[0], fr.J * v[1], v[2], v[3]);
    const double rj2 = fr.Rvec(v[0], v[1], fr.J * v[2], fr.J * v[3]);
    worst = std::max({worst, std::abs(rj - r), std::abs(rj2 - r)});
  }
  return worst;
}

double cpn_killing_vs_fs_deviation(const CpnFrame& fr) {
  double worst = 0.0;
  for (size_t a = 0; a < fr.pIdx.size(); ++a)
    for (size_t b = 0; b < fr.pIdx.size(); ++b) {
      const double kf = killing_form(fr.su[fr.pIdx[a]], fr.su[fr.pIdx[b]]);
      const double fs = fr.jets[fr.pIdx[a]].value.dot(fr.G * fr.jets[fr.pIdx[b]].value);
      worst = std::max(worst, std::abs(kf - fs));
    }
  return worst;
}

}  // namespace stab::pointlab
