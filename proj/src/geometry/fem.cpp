#include "stab/geometry/fem.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>
#include <vector>

#include "stab/core/util.hpp"

namespace stab::geom {

FemOperators assemble_fem(const TriMesh& mesh) {
  const int V = mesh.num_vertices();
  const int E = mesh.num_edges();
  const int F = mesh.num_faces();
  FemOperators ops;
  ops.lumpedMass = Eigen::VectorXd::Zero(V);
  ops.cotanEdgeWeight = Eigen::VectorXd::Zero(E);
  ops.faceGradCoef.resize(F);
  ops.faceArea.resize(F);
  ops.faceUnitBary.resize(F);

  std::vector<Eigen::Triplet<double>> massT;
  massT.reserve(9 * F);
  double total = 0.0;
  for (int f = 0; f < F; ++f) {
    const auto& tri = mesh.faces[f];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const Vec3 n = (b - a).cross(c - a);
    const double area2 = n.norm();
    require(area2 > 1e-14, "assemble_fem: degenerate face " + std::to_string(f));
    const double area = 0.5 * area2;
    ops.faceArea[f] = area;
    ops.faceUnitBary[f] = ((a + b + c) / 3.0).normalized();
    total += area;

    const Vec3 nhat = n / area2;
    // gradient of the hat function at corner c_i is nhat x (opposite edge) / (2A)
    const Vec3 edgeOpp[3] = {c - b, a - c, b - a};
    for (int i = 0; i < 3; ++i) ops.faceGradCoef[f][i] = nhat.cross(edgeOpp[i]) / (2.0 * area);

    // cotangent of the interior angle at each corner
    const Vec3* p[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
      const Vec3 u = *p[(i + 1) % 3] - *p[i];
      const Vec3 v = *p[(i + 2) % 3] - *p[i];
      const double cot = u.dot(v) / u.cross(v).norm();
      // angle at corner i faces the side (i+1, i+2), which is face side (i+1)
      ops.cotanEdgeWeight[mesh.faceEdge[f][(i + 1) % 3]] += 0.5 * cot;
    }

    for (int i = 0; i < 3; ++i) {
      ops.lumpedMass[tri[i]] += area / 3.0;
      for (int j = 0; j < 3; ++j)
        massT.emplace_back(tri[i], tri[j], (i == j ? 2.0 : 1.0) * area / 12.0);
    }
  }
  ops.totalArea = total;

  ops.mass.resize(V, V);
  ops.mass.setFromTriplets(massT.begin(), massT.end());

  // Assemble off-diagonal stiffness first, then set the diagonal to the
  // negated row sum of the assembled matrix so that K*1 vanishes exactly.
  std::vector<Eigen::Triplet<double>> stiffT;
  stiffT.reserve(2 * E);
  for (int e = 0; e < E; ++e) {
    const int i = mesh.edges[e][0], j = mesh.edges[e][1];
    const double w = ops.cotanEdgeWeight[e];
    stiffT.emplace_back(i, j, -w);
    stiffT.emplace_back(j, i, -w);
  }
  Eigen::SparseMatrix<double> offdiag(V, V);
  offdiag.setFromTriplets(stiffT.begin(), stiffT.end());
  const Eigen::VectorXd rowSum = offdiag * Eigen::VectorXd::Ones(V);
  Eigen::SparseMatrix<double> diag(V, V);
  std::vector<Eigen::Triplet<double>> diagT;
  diagT.reserve(V);
  for (int v = 0; v < V; ++v) diagT.emplace_back(v, v, -rowSum[v]);
  diag.setFromTriplets(diagT.begin(), diagT.end());
  ops.stiffness = offdiag + diag;
  ops.stiffness.makeCompressed();
  ops.mass.makeCompressed();
  return ops;
}

std::vector<Vec3> gradient_field_faces(const TriMesh& mesh, const FemOperators& ops,
                                       const Eigen::VectorXd& u) {
  require(u.size() == mesh.num_vertices(), "gradient_field: length mismatch");
  std::vector<Vec3> g(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    Vec3 s = Vec3::Zero();
    for (int c = 0; c < 3; ++c) s += u[mesh.faces[f][c]] * ops.faceGradCoef[f][c];
    g[f] = s;
  }
  return g;
}

std::vector<Vec3> gradient_field_vertices(const TriMesh& mesh, const FemOperators& ops,
                                          const Eigen::VectorXd& u) {
  auto gf = gradient_field_faces(mesh, ops, u);
  std::vector<Vec3> gv(mesh.num_vertices(), Vec3::Zero());
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    for (int c = 0; c < 3; ++c) {
      gv[mesh.faces[f][c]] += ops.faceArea[f] * gf[f];
      wsum[mesh.faces[f][c]] += ops.faceArea[f];
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    gv[v] /= wsum[v];
    const Vec3& x = mesh.vertices[v];
    gv[v] -= gv[v].dot(x) * x;
  }
  return gv;
}

void write_coo(const Eigen::SparseMatrix<double>& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "write_coo: cannot open " + path);
  out.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
  require(out.good(), "write_coo: write failed for " + path);
}

}  // namespace stab::geom
