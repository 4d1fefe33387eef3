#include "stab/ymh/model.hpp"

#include <cmath>
#include <vector>

#include "stab/core/util.hpp"

namespace stab::ymh {

using Complex = std::complex<double>;

double ymh_energy(const YMHState& s) {
  require(s.u.allFinite() && s.bundle.edgePhases.allFinite(), "ymh_energy: non-finite input");
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const double eps2 = s.epsilon * s.epsilon;

  const VectorXd flux = plaquette_fluxes(s.bundle);
  double curv = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) curv += flux[f] * flux[f] / fem.faceArea[f];
  curv *= eps2;

  double dirich = 0.0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const int i = m.edges[e][0], j = m.edges[e][1];
    const Complex d = s.u[j] - std::polar(1.0, s.bundle.edgePhases[e]) * s.u[i];
    dirich += fem.cotanEdgeWeight[e] * std::norm(d);
  }

  double pot = 0.0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const double w = 1.0 - std::norm(s.u[v]);
    pot += fem.lumpedMass[v] * w * w / (4.0 * eps2);
  }
  return curv + dirich + pot;
}

YMHGradient ymh_gradient(const YMHState& s) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const double eps2 = s.epsilon * s.epsilon;
  const int V = m.num_vertices(), E = m.num_edges(), F = m.num_faces();

  YMHGradient g;
  g.du = VectorXcd::Zero(V);
  g.dtheta = VectorXd::Zero(E);

  const VectorXd flux = plaquette_fluxes(s.bundle);
  for (int f = 0; f < F; ++f) {
    const double c = 2.0 * eps2 * flux[f] / fem.faceArea[f];
    for (int k = 0; k < 3; ++k)
      g.dtheta[m.faceEdge[f][k]] += c * m.faceEdgeSign[f][k];
  }

  for (int e = 0; e < E; ++e) {
    const int i = m.edges[e][0], j = m.edges[e][1];
    const double w = fem.cotanEdgeWeight[e];
    const Complex ph = std::polar(1.0, s.bundle.edgePhases[e]);
    const Complex z = ph * s.u[i];
    g.du[j] += 2.0 * w * (s.u[j] - z);
    g.du[i] += 2.0 * w * (s.u[i] - std::conj(ph) * s.u[j]);
    g.dtheta[e] += 2.0 * w * std::imag(std::conj(s.u[j]) * z);
  }

  for (int v = 0; v < V; ++v)
    g.du[v] += fem.lumpedMass[v] * (std::norm(s.u[v]) - 1.0) * s.u[v] / eps2;
  return g;
}

VectorXd state_to_flat(const YMHState& s) {
  const int V = static_cast<int>(s.u.size());
  const int E = static_cast<int>(s.bundle.edgePhases.size());
  VectorXd x(2 * V + E);
  for (int v = 0; v < V; ++v) {
    x[2 * v] = s.u[v].real();
    x[2 * v + 1] = s.u[v].imag();
  }
  x.tail(E) = s.bundle.edgePhases;
  return x;
}

YMHState flat_to_state(const YMHState& like, const VectorXd& x) {
  YMHState out = like;
  const int V = static_cast<int>(like.u.size());
  for (int v = 0; v < V; ++v) out.u[v] = Complex(x[2 * v], x[2 * v + 1]);
  out.bundle.edgePhases = x.tail(x.size() - 2 * V);
  return out;
}

VectorXd gradient_to_flat(const YMHGradient& g) {
  const int V = static_cast<int>(g.du.size());
  VectorXd x(2 * V + g.dtheta.size());
  for (int v = 0; v < V; ++v) {
    x[2 * v] = g.du[v].real();
    x[2 * v + 1] = g.du[v].imag();
  }
  x.tail(g.dtheta.size()) = g.dtheta;
  return x;
}

Eigen::SparseMatrix<double> ymh_hessian_matrix(const YMHState& s) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const double eps2 = s.epsilon * s.epsilon;
  const int V = m.num_vertices(), E = m.num_edges(), F = m.num_faces();
  const int N = 2 * V + E;
  std::vector<Eigen::Triplet<double>> T;
  T.reserve(16 * E + 9 * F + 4 * V);
  auto add = [&T](int r, int c, double v) { T.emplace_back(r, c, v); };

  // curvature term: d^2/dtheta^2 of eps^2 Phi_f^2 / a_f
  for (int f = 0; f < F; ++f) {
    const double c = 2.0 * eps2 / fem.faceArea[f];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        add(2 * V + m.faceEdge[f][a], 2 * V + m.faceEdge[f][b],
            c * m.faceEdgeSign[f][a] * m.faceEdgeSign[f][b]);
  }

  // edge (covariant difference) term
  for (int e = 0; e < E; ++e) {
    const int i = m.edges[e][0], j = m.edges[e][1];
    const double w = fem.cotanEdgeWeight[e];
    const double th = s.bundle.edgePhases[e];
    const double c = std::cos(th), sn = std::sin(th);
    const Complex ph(c, sn);
    const Complex z = ph * s.u[i];            // transported u_i
    const Complex uj = s.u[j];
    const int ir = 2 * i, ii = 2 * i + 1, jr = 2 * j, ji = 2 * j + 1, te = 2 * V + e;

    // d2/du_j^2 and d2/du_i^2
    add(jr, jr, 2.0 * w);
    add(ji, ji, 2.0 * w);
    add(ir, ir, 2.0 * w);
    add(ii, ii, 2.0 * w);
    // d2/du_j du_i = -2w R(theta)
    add(jr, ir, -2.0 * w * c);
    add(jr, ii, 2.0 * w * sn);
    add(ji, ir, -2.0 * w * sn);
    add(ji, ii, -2.0 * w * c);
    add(ir, jr, -2.0 * w * c);
    add(ii, jr, 2.0 * w * sn);
    add(ir, ji, -2.0 * w * sn);
    add(ii, ji, -2.0 * w * c);
    // d2/du_j dtheta = 2w (Im z, -Re z); d2/du_i dtheta = 2w (i e^{-i th} u_j)
    add(jr, te, 2.0 * w * z.imag());
    add(te, jr, 2.0 * w * z.imag());
    add(ji, te, -2.0 * w * z.real());
    add(te, ji, -2.0 * w * z.real());
    const Complex iconj = Complex(0.0, 1.0) * std::conj(ph) * uj;
    add(ir, te, 2.0 * w * iconj.real());
    add(te, ir, 2.0 * w * iconj.real());
    add(ii, te, 2.0 * w * iconj.imag());
    add(te, ii, 2.0 * w * iconj.imag());
    // d2/dtheta^2 = 2w Re(conj(u_j) z)
    add(te, te, 2.0 * w * std::real(std::conj(uj) * z));
  }

  // potential term
  for (int v = 0; v < V; ++v) {
    const double mlump = fem.lumpedMass[v];
    const double a = s.u[v].real(), b = s.u[v].imag();
    const double p = std::norm(s.u[v]) - 1.0;
    add(2 * v, 2 * v, mlump * (p + 2.0 * a * a) / eps2);
    add(2 * v, 2 * v + 1, mlump * 2.0 * a * b / eps2);
    add(2 * v + 1, 2 * v, mlump * 2.0 * a * b / eps2);
    add(2 * v + 1, 2 * v + 1, mlump * (p + 2.0 * b * b) / eps2);
  }

  Eigen::SparseMatrix<double> H(N, N);
  H.setFromTriplets(T.begin(), T.end());
  H.makeCompressed();
  return H;
}

VectorXd ymh_metric_diag(const YMHState& s) {
  const int V = s.bundle.mesh->num_vertices();
  const int E = s.bundle.mesh->num_edges();
  VectorXd d(2 * V + E);
  for (int v = 0; v < V; ++v)
    d[2 * v] = d[2 * v + 1] = s.bundle.fem->lumpedMass[v];
  for (int e = 0; e < E; ++e) {
    const double w = s.bundle.fem->cotanEdgeWeight[e];
    require(w > 0.0, "ymh_metric_diag: nonpositive cotangent weight");
    d[2 * V + e] = w;
  }
  return d;
}

VectorXd gauge_direction(const YMHState& s, const VectorXd& phi) {
  const auto& m = *s.bundle.mesh;
  const int V = m.num_vertices(), E = m.num_edges();
  require(phi.size() == V, "gauge_direction: length mismatch");
  VectorXd g(2 * V + E);
  for (int v = 0; v < V; ++v) {
    const Complex d = Complex(0.0, 1.0) * phi[v] * s.u[v];
    g[2 * v] = d.real();
    g[2 * v + 1] = d.imag();
  }
  for (int e = 0; e < E; ++e)
    g[2 * V + e] = phi[m.edges[e][1]] - phi[m.edges[e][0]];
  return g;
}

double max_section_abs(const YMHState& s) {
  double mx = 0.0;
  for (int v = 0; v < s.u.size(); ++v) mx = std::max(mx, std::abs(s.u[v]));
  return mx;
}

}  // namespace stab::ymh
