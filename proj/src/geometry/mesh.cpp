#include "stab/geometry/mesh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "stab/core/util.hpp"

namespace stab::geom {

double TriMesh::face_area(int f) const {
  const Vec3& a = vertices[faces[f][0]];
  const Vec3& b = vertices[faces[f][1]];
  const Vec3& c = vertices[faces[f][2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 TriMesh::face_normal(int f) const {
  const Vec3& a = vertices[faces[f][0]];
  const Vec3& b = vertices[faces[f][1]];
  const Vec3& c = vertices[faces[f][2]];
  return (b - a).cross(c - a).normalized();
}

Vec3 TriMesh::face_barycenter(int f) const {
  return (vertices[faces[f][0]] + vertices[faces[f][1]] + vertices[faces[f][2]]) / 3.0;
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (int f = 0; f < num_faces(); ++f) s += face_area(f);
  return s;
}

namespace {

void finalize(TriMesh& m) {
  const int F = m.num_faces();
  std::map<std::pair<int, int>, int> edgeIndex;
  m.edges.clear();
  for (int f = 0; f < F; ++f) {
    for (int c = 0; c < 3; ++c) {
      int i = m.faces[f][c], j = m.faces[f][(c + 1) % 3];
      auto key = std::minmax(i, j);
      if (edgeIndex.find(key) == edgeIndex.end()) {
        edgeIndex[key] = m.num_edges();
        m.edges.push_back({key.first, key.second});
      }
    }
  }
  const int E = m.num_edges();
  m.faceEdge.assign(F, {-1, -1, -1});
  m.faceEdgeSign.assign(F, {0, 0, 0});
  m.edgeFace.assign(E, {-1, -1});
  m.faceNeighbor.assign(F, {-1, -1, -1});
  for (int f = 0; f < F; ++f) {
    for (int c = 0; c < 3; ++c) {
      int i = m.faces[f][c], j = m.faces[f][(c + 1) % 3];
      auto key = std::minmax(i, j);
      int e = edgeIndex.at(key);
      int sign = (i < j) ? +1 : -1;
      m.faceEdge[f][c] = e;
      m.faceEdgeSign[f][c] = sign;
      int slot = (sign > 0) ? 0 : 1;
      require(m.edgeFace[e][slot] == -1, "mesh: edge traversed twice in the same direction");
      m.edgeFace[e][slot] = f;
    }
  }
  for (int f = 0; f < F; ++f) {
    for (int c = 0; c < 3; ++c) {
      int e = m.faceEdge[f][c];
      int other = (m.edgeFace[e][0] == f) ? m.edgeFace[e][1] : m.edgeFace[e][0];
      m.faceNeighbor[f][c] = other;
    }
  }
}

}  // namespace

TriMesh build_icosphere(int level) {
  require(level >= 0 && level <= 8, "build_icosphere: level must be in [0, 8]");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.level = level;
  const double raw[12][3] = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : raw) m.vertices.push_back(Vec3(v[0], v[1], v[2]).normalized());
  m.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = m.num_vertices();
      m.vertices.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized());
      midpoint[key] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * m.faces.size());
    for (const auto& f : m.faces) {
      int a = f[0], b = f[1], c = f[2];
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  finalize(m);
  return m;
}

void validate_mesh(const TriMesh& m) {
  const int V = m.num_vertices(), E = m.num_edges(), F = m.num_faces();
  require(V - E + F == 2, "mesh: Euler characteristic != 2");
  for (int v = 0; v < V; ++v)
    require(std::abs(m.vertices[v].norm() - 1.0) <= 1e-14,
            "mesh: vertex " + std::to_string(v) + " not on the unit sphere");
  for (int e = 0; e < E; ++e)
    require(m.edgeFace[e][0] >= 0 && m.edgeFace[e][1] >= 0,
            "mesh: edge " + std::to_string(e) + " not shared by two oppositely oriented faces");
  for (int f = 0; f < F; ++f) {
    const Vec3& a = m.vertices[m.faces[f][0]];
    const Vec3& b = m.vertices[m.faces[f][1]];
    const Vec3& c = m.vertices[m.faces[f][2]];
    double vol = (b - a).cross(c - a).dot(a + b + c);
    require(vol > 0.0, "mesh: face " + std::to_string(f) + " not counterclockwise from outside");
    require(m.face_area(f) > 1e-14, "mesh: degenerate face " + std::to_string(f));
  }
  if (m.level >= 5) {
    double area = m.total_area();
    require(std::abs(area - 4.0 * kPi) <= 1e-3 * 4.0 * kPi,
            "mesh: total area deviates more than 0.1% from 4*pi");
  }
}

void write_off(const TriMesh& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "write_off: cannot open " + path);
  out << "OFF\n" << m.num_vertices() << " " << m.num_faces() << " " << m.num_edges() << "\n";
  out.precision(17);
  for (const auto& v : m.vertices) out << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& f : m.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  require(out.good(), "write_off: write failed for " + path);
}

TriMesh read_off(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "read_off: cannot open " + path);
  std::string tag;
  in >> tag;
  require(tag == "OFF", "read_off: missing OFF header in " + path);
  int V = 0, F = 0, E = 0;
  in >> V >> F >> E;
  require(in.good() && V > 0 && F > 0, "read_off: bad counts line in " + path);
  TriMesh m;
  m.level = -1;  // unknown provenance
  m.vertices.resize(V);
  for (int v = 0; v < V; ++v) in >> m.vertices[v][0] >> m.vertices[v][1] >> m.vertices[v][2];
  m.faces.resize(F);
  for (int f = 0; f < F; ++f) {
    int k;
    in >> k >> m.faces[f][0] >> m.faces[f][1] >> m.faces[f][2];
    require(k == 3, "read_off: non-triangular face in " + path);
  }
  require(in.good(), "read_off: truncated file " + path);
  finalize(m);
  return m;
}

}  // namespace stab::geom
