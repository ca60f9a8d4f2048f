#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "softcut/geometry.hpp"

namespace softcut {

using VertexId = std::int32_t;
using FaceId = std::int32_t;
using Face = Eigen::Vector3i;

struct BoneWeight {
  int bone = 0;
  double weight = 0.0;

  friend bool operator==(const BoneWeight&, const BoneWeight&) = default;
};

/// Per-vertex bone influences, sorted by bone id.
using SkinWeights = std::vector<BoneWeight>;

/// Indexed triangle mesh. Faces are tombstoned rather than erased so face ids
/// stay stable across deltas; compaction happens on export.
struct TriMesh {
  std::vector<Vec3d> positions;
  std::vector<Vec3d> normals;
  std::vector<Vec2d> uvs;
  std::vector<SkinWeights> skin;  // empty when the mesh is not skinned
  std::vector<Face> faces;
  std::vector<std::uint8_t> face_alive;
  std::uint64_t epoch = 0;
  // Length every tolerance is scaled by; fixed when the mesh is created so
  // predicates do not drift as the mesh is edited.
  double tolerance_scale = 1.0;

  int vertex_count() const { return static_cast<int>(positions.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int live_face_count() const;
  bool alive(FaceId f) const { return face_alive[f] != 0; }
  bool has_skin() const { return !skin.empty(); }

  double eps_side() const { return 1e-6 * tolerance_scale; }
  double eps_area() const { return 1e-12 * tolerance_scale * tolerance_scale; }

  std::array<Vec3d, 3> face_points(FaceId f) const {
    const Face& t = faces[f];
    return {positions[t[0]], positions[t[1]], positions[t[2]]};
  }
  double face_area(FaceId f) const;
  Aabbd face_bounds(FaceId f) const;
  Aabbd bounds() const;  // of vertices referenced by live faces
  double total_area() const;

  VertexId add_vertex(const Vec3d& p, const Vec3d& n, const Vec2d& uv, SkinWeights w = {});
  FaceId add_face(const Face& f);

  /// Resets tolerance_scale from the current live bounds.
  void refresh_tolerance_scale();
};

/// Vertex created by an edit, with the edge it was interpolated on.
struct AddedVertex {
  VertexId id = -1;
  Vec3d position = Vec3d::Zero();
  Vec3d normal = Vec3d::UnitZ();
  Vec2d uv = Vec2d::Zero();
  SkinWeights skin;
  VertexId parent_a = -1;
  VertexId parent_b = -1;
  double t = 0.0;
};

struct AddedFace {
  FaceId id = -1;
  Face vertices = Face::Zero();
};

/// One atomic mesh edit. Applying it to the mesh at base_epoch yields the
/// mesh at `epoch`.
struct MeshDelta {
  std::uint64_t base_epoch = 0;
  std::uint64_t epoch = 0;
  std::vector<AddedVertex> added_vertices;
  std::vector<FaceId> removed_faces;
  std::vector<AddedFace> added_faces;

  bool empty() const { return added_vertices.empty() && removed_faces.empty() && added_faces.empty(); }
};

void apply_delta(TriMesh& mesh, const MeshDelta& delta);
void revert_delta(TriMesh& mesh, const MeshDelta& delta);

/// Delta equivalent to applying `first` then `second`.
MeshDelta compose(const MeshDelta& first, const MeshDelta& second);

Vec3d face_normal(const TriMesh& mesh, FaceId f);
void recompute_vertex_normals(TriMesh& mesh);

/// Live-face triangles as point triples.
std::vector<std::array<Vec3d, 3>> live_triangles(const TriMesh& mesh);

struct CompactMesh {
  TriMesh mesh;
  std::vector<VertexId> old_to_new;  // -1 for dropped vertices
};

/// Drops dead faces and unreferenced vertices, preserving relative order.
CompactMesh compact(const TriMesh& mesh);

/// Edges (min, max) used by more than two live faces.
std::vector<std::pair<VertexId, VertexId>> non_manifold_edges(const TriMesh& mesh);

struct TJunction {
  VertexId vertex;
  FaceId face;
  int edge;  // local edge index: (v[edge], v[(edge+1)%3])
};

/// Exhaustive scan for vertices lying in the interior of a live face's edge.
std::vector<TJunction> find_t_junctions(const TriMesh& mesh, double eps);

/// Human-readable invariant violations (empty when the mesh is sound).
std::vector<std::string> validate(const TriMesh& mesh);

/// Unique vertices referenced by live faces, ascending.
std::vector<VertexId> live_vertices(const TriMesh& mesh);

}  // namespace softcut
