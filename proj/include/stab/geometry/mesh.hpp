#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

namespace stab::geom {

using Vec3 = Eigen::Vector3d;

/// Geodesic icosphere: triangulated unit sphere with consistent outward
/// orientation and full edge/face adjacency.
struct TriMesh {
  std::vector<Vec3> vertices;  // unit norm
  std::vector<std::array<int, 3>> faces;  // counterclockwise from outside
  std::vector<std::array<int, 2>> edges;  // vertex pairs, i < j
  int level = 0;

  // adjacency, filled by finalize():
  // faceEdge[f][c]  : edge index of side (v_c -> v_{c+1})
  // faceEdgeSign[f][c] : +1 if traversed in stored (i<j) direction
  // edgeFace[e]     : {face using e positively, face using e negatively}
  // faceNeighbor[f][c] : face across side c
  std::vector<std::array<int, 3>> faceEdge;
  std::vector<std::array<int, 3>> faceEdgeSign;
  std::vector<std::array<int, 2>> edgeFace;
  std::vector<std::array<int, 3>> faceNeighbor;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double face_area(int f) const;
  Vec3 face_normal(int f) const;        // unit, outward
  Vec3 face_barycenter(int f) const;    // planar barycenter, not normalized
  double total_area() const;
};

/// Build the level-`level` geodesic icosphere (level 0 = icosahedron).
/// Midpoints of subdivided edges are re-projected to unit norm.
TriMesh build_icosphere(int level);

/// Throws with a description of the first violated mesh invariant.
void validate_mesh(const TriMesh& mesh);

// OFF text format ("OFF", counts line, vertex lines, "3 i j k" face lines).
void write_off(const TriMesh& mesh, const std::string& path);
TriMesh read_off(const std::string& path);

}  // namespace stab::geom
