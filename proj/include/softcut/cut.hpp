#pragma once

#include <utility>
#include <vector>

#include "softcut/mesh.hpp"

namespace softcut {

/// Plane through the three points, normal by the right-hand rule
/// (tip - entry) x (end - entry). Throws Collinear.
Planed cut_plane_from_samples(const Vec3d& entry_point, const Vec3d& scalpel_tip, const Vec3d& scalpel_end);

struct CutResult {
  TriMesh positive_mesh;
  TriMesh negative_mesh;
  /// (positive vertex, negative vertex) for every vertex duplicated on the seam.
  std::vector<std::pair<VertexId, VertexId>> seam_vertex_pairs;
  /// Source of each sub-mesh vertex in the split mesh: ids below the input
  /// vertex count are input vertices, the rest are entries of added_vertices.
  std::vector<VertexId> positive_source;
  std::vector<VertexId> negative_source;
  std::vector<AddedVertex> added_vertices;
  int intersection_points = 0;
  int split_faces = 0;
  /// True when the plane leaves the whole mesh on one side; that side then
  /// holds the mesh unchanged and the other is empty.
  bool no_intersection = false;
};

/// Splits every face crossing the plane into three (one on one side, two on
/// the other, quads by the shorter diagonal) and partitions the result into
/// two compacted sub-meshes. Seam vertices are duplicated.
CutResult cut(const TriMesh& mesh, const Planed& plane);

struct FacePartition {
  std::vector<FaceId> positive;
  std::vector<FaceId> negative;
};

/// Assigns each live face by the side of its non-On corners; all-On faces go
/// positive. Throws StraddlingFace if a face has corners strictly on both sides.
FacePartition partition_faces(const TriMesh& mesh, const Planed& plane);

}  // namespace softcut
