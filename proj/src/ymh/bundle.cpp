#include "stab/ymh/bundle.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <deque>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "stab/core/util.hpp"

namespace stab::ymh {

VectorXd plaquette_fluxes(const LatticeBundle& b) {
  const auto& m = *b.mesh;
  VectorXd flux(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
      s += m.faceEdgeSign[f][c] * b.edgePhases[m.faceEdge[f][c]];
    flux[f] = wrap_angle(s);
  }
  return flux;
}

int ymh_degree(const LatticeBundle& b) {
  const VectorXd flux = plaquette_fluxes(b);
  for (int f = 0; f < flux.size(); ++f)
    require(std::abs(flux[f]) < kPi, "ymh_degree: plaquette flux at the wrap branch");
  const double total = flux.sum() / kTwoPi;
  const double rounded = std::round(total);
  require(std::abs(total - rounded) < 1e-9,
          "ymh_degree: total flux is not an integer multiple of 2*pi");
  return static_cast<int>(rounded);
}

LatticeBundle bundle_init(const geom::TriMesh& mesh, const geom::FemOperators& fem, int degree) {
  const int V = mesh.num_vertices(), E = mesh.num_edges(), F = mesh.num_faces();
  double maxArea = 0.0;
  for (int f = 0; f < F; ++f) maxArea = std::max(maxArea, fem.faceArea[f]);
  require(kTwoPi * std::abs(degree) * maxArea / fem.totalArea < 0.999 * kPi,
          "bundle_init: level too coarse for |degree| (plaquette flux would reach pi)");

  VectorXd target(F);
  for (int f = 0; f < F; ++f) target[f] = kTwoPi * degree * fem.faceArea[f] / fem.totalArea;

  LatticeBundle b;
  b.mesh = &mesh;
  b.fem = &fem;
  b.edgePhases = VectorXd::Zero(E);

  // primal spanning tree (phases stay zero there)
  std::vector<char> inTree(E, 0);
  {
    std::vector<char> seen(V, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    std::vector<std::vector<std::pair<int, int>>> incident(V);  // (edge, other vertex)
    for (int e = 0; e < E; ++e) {
      incident[mesh.edges[e][0]].push_back({e, mesh.edges[e][1]});
      incident[mesh.edges[e][1]].push_back({e, mesh.edges[e][0]});
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (auto [e, w] : incident[v])
        if (!seen[w]) {
          seen[w] = 1;
          inTree[e] = 1;
          q.push_back(w);
        }
    }
  }

  // the non-tree edges form a spanning tree of the dual graph; orient it
  // from face 0 and sweep leaves-to-root, fixing one edge phase per face
  std::vector<int> parentFace(F, -2), parentEdge(F, -1), order;
  parentFace[0] = -1;
  std::deque<int> q{0};
  order.reserve(F);
  while (!q.empty()) {
    int f = q.front();
    q.pop_front();
    order.push_back(f);
    for (int c = 0; c < 3; ++c) {
      const int e = mesh.faceEdge[f][c];
      if (inTree[e]) continue;
      const int g = mesh.faceNeighbor[f][c];
      if (parentFace[g] == -2) {
        parentFace[g] = f;
        parentEdge[g] = e;
        q.push_back(g);
      }
    }
  }
  require(static_cast<int>(order.size()) == F, "bundle_init: dual tree did not span all faces");

  for (int k = F - 1; k >= 1; --k) {
    const int f = order[k];
    const int e = parentEdge[f];
    double rest = 0.0;
    int sign = 0;
    for (int c = 0; c < 3; ++c) {
      const int ec = mesh.faceEdge[f][c];
      if (ec == e)
        sign = mesh.faceEdgeSign[f][c];
      else
        rest += mesh.faceEdgeSign[f][c] * b.edgePhases[ec];
    }
    b.edgePhases[e] = sign * (target[f] - rest);
  }
  for (int e = 0; e < E; ++e) b.edgePhases[e] = wrap_angle(b.edgePhases[e]);

  require(ymh_degree(b) == degree, "bundle_init: realized degree mismatch");
  return b;
}

YMHState make_state(const LatticeBundle& bundle, const VectorXcd& u, double epsilon) {
  require(epsilon > 0.0, "YMHState: epsilon must be positive");
  require(u.size() == bundle.mesh->num_vertices(), "YMHState: section length mismatch");
  require(u.allFinite(), "YMHState: non-finite section value");
  return {bundle, u, epsilon};
}

YMHState gauge_transform(const YMHState& s, const GaugeFunction& phi) {
  require(phi.theta.size() == s.u.size(), "gauge_transform: length mismatch");
  YMHState out = s;
  for (int v = 0; v < s.u.size(); ++v)
    out.u[v] = std::polar(1.0, phi.theta[v]) * s.u[v];
  const auto& m = *s.bundle.mesh;
  for (int e = 0; e < m.num_edges(); ++e) {
    const int i = m.edges[e][0], j = m.edges[e][1];
    out.bundle.edgePhases[e] =
        wrap_angle(s.bundle.edgePhases[e] + phi.theta[j] - phi.theta[i]);
  }
  return out;
}

YMHState coulomb_project(const YMHState& s) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const int V = m.num_vertices(), E = m.num_edges();
  // minimize sum_e w_e (theta_e + (d phi)_e)^2: K phi = -d^T W theta
  VectorXd rhs = VectorXd::Zero(V);
  for (int e = 0; e < E; ++e) {
    const double w = fem.cotanEdgeWeight[e] * s.bundle.edgePhases[e];
    rhs[m.edges[e][1]] -= w;
    rhs[m.edges[e][0]] += w;
  }
  // ground vertex 0 to fix the constant; re-center afterwards
  Eigen::SparseMatrix<double> K = fem.stiffness;
  std::vector<Eigen::Triplet<double>> T{{0, 0, 1.0}};
  Eigen::SparseMatrix<double> pin(V, V);
  pin.setFromTriplets(T.begin(), T.end());
  // rhs sums to zero, so grounding forces phi[0] = 0 and K phi = rhs holds
  K = K + pin;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(K);
  require(solver.info() == Eigen::Success, "coulomb_project: factorization failed");
  VectorXd phi = solver.solve(rhs);
  require(phi.allFinite(), "coulomb_project: linear solve failed");
  phi.array() -= phi.mean();
  return gauge_transform(s, GaugeFunction{phi});
}

void write_state_json(const YMHState& s, const std::string& path) {
  nlohmann::ordered_json j;
  j["meshLevel"] = s.bundle.mesh->level;
  j["epsilon"] = s.epsilon;
  j["degree"] = ymh_degree(s.bundle);
  j["edgePhases"] = std::vector<double>(s.bundle.edgePhases.data(),
                                        s.bundle.edgePhases.data() + s.bundle.edgePhases.size());
  std::vector<double> re(s.u.size()), im(s.u.size());
  for (int v = 0; v < s.u.size(); ++v) {
    re[v] = s.u[v].real();
    im[v] = s.u[v].imag();
  }
  j["re"] = re;
  j["im"] = im;
  std::ofstream out(path);
  require(out.good(), "write_state_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

YMHState read_state_json(const geom::TriMesh& mesh, const geom::FemOperators& fem,
                         const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "read_state_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  LatticeBundle b;
  b.mesh = &mesh;
  b.fem = &fem;
  const auto phases = j.at("edgePhases").get<std::vector<double>>();
  require(static_cast<int>(phases.size()) == mesh.num_edges(),
          "read_state_json: edge count mismatch");
  b.edgePhases = Eigen::Map<const VectorXd>(phases.data(), phases.size());
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  require(re.size() == im.size() && static_cast<int>(re.size()) == mesh.num_vertices(),
          "read_state_json: vertex count mismatch");
  VectorXcd u(re.size());
  for (size_t v = 0; v < re.size(); ++v) u[v] = std::complex<double>(re[v], im[v]);
  return make_state(b, u, j.at("epsilon").get<double>());
}

}  // namespace stab::ymh
