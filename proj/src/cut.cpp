#include "softcut/cut.hpp"

#include <map>

#include "softcut/skinning.hpp"

namespace softcut {

Planed cut_plane_from_samples(const Vec3d& entry_point, const Vec3d& scalpel_tip, const Vec3d& scalpel_end) {
  const Vec3d u = scalpel_tip - entry_point;
  const Vec3d v = scalpel_end - entry_point;
  const Vec3d n = u.cross(v);
  const double scale = std::max({u.norm(), v.norm(), 1e-300});
  if (n.norm() <= 1e-12 * scale * scale) throw Error(ErrorKind::Collinear, "cut plane points are collinear");
  return Planed::through(entry_point, n);
}

FacePartition partition_faces(const TriMesh& mesh, const Planed& plane) {
  FacePartition out;
  const double eps = mesh.eps_side();
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    bool pos = false, neg = false;
    for (int k = 0; k < 3; ++k) {
      const Side s = plane_side(mesh.positions[mesh.faces[f][k]], plane, eps);
      pos |= s == Side::Positive;
      neg |= s == Side::Negative;
    }
    if (pos && neg) throw Error(ErrorKind::StraddlingFace, "face " + std::to_string(f) + " straddles the cut plane");
    (neg ? out.negative : out.positive).push_back(f);
  }
  return out;
}

namespace {

// Shorter diagonal; equal lengths go to the diagonal with the smaller id pair.
void triangulate(TriMesh& m, const std::vector<VertexId>& loop) {
  if (loop.size() == 3) {
    m.add_face(Face(loop[0], loop[1], loop[2]));
    return;
  }
  const double d02 = (m.positions[loop[0]] - m.positions[loop[2]]).squaredNorm();
  const double d13 = (m.positions[loop[1]] - m.positions[loop[3]]).squaredNorm();
  const auto key02 = std::minmax(loop[0], loop[2]);
  const auto key13 = std::minmax(loop[1], loop[3]);
  const bool use02 = d02 < d13 || (d02 == d13 && key02 < key13);
  if (use02) {
    m.add_face(Face(loop[0], loop[1], loop[2]));
    m.add_face(Face(loop[0], loop[2], loop[3]));
  } else {
    m.add_face(Face(loop[1], loop[2], loop[3]));
    m.add_face(Face(loop[1], loop[3], loop[0]));
  }
}

TriMesh extract(const TriMesh& split, const std::vector<FaceId>& faces, std::vector<VertexId>& source) {
  TriMesh masked = split;
  std::fill(masked.face_alive.begin(), masked.face_alive.end(), 0);
  for (FaceId f : faces) masked.face_alive[f] = 1;
  CompactMesh c = compact(masked);
  source.assign(c.mesh.vertex_count(), -1);
  for (VertexId v = 0; v < split.vertex_count(); ++v)
    if (c.old_to_new[v] >= 0) source[c.old_to_new[v]] = v;
  return std::move(c.mesh);
}

}  // namespace

CutResult cut(const TriMesh& mesh, const Planed& plane) {
  CutResult out;
  const double eps = mesh.eps_side();
  TriMesh split = mesh;
  const int original_faces = mesh.face_count();
  std::map<std::pair<VertexId, VertexId>, VertexId> crossing;  // (positive end, negative end)

  for (FaceId f = 0; f < original_faces; ++f) {
    if (!mesh.alive(f)) continue;
    const Face tri = mesh.faces[f];
    const auto clip = triangle_plane_clip<double>(mesh.face_points(f), plane, eps);
    if (!clip.split.straddles) continue;

    auto vertex_for = [&](const SplitPoint<double>& p) -> VertexId {
      if (p.is_corner()) return tri[p.corner];
      const VertexId a = tri[p.a], b = tri[p.b];
      const auto [it, fresh] = crossing.try_emplace({a, b}, -1);
      if (!fresh) return it->second;
      AddedVertex v;
      v.parent_a = a;
      v.parent_b = b;
      v.t = p.t;
      v.position = p.point;
      const Vec3d n = (1.0 - p.t) * mesh.normals[a] + p.t * mesh.normals[b];
      v.normal = n.norm() > 0 ? n.normalized() : mesh.normals[a];
      v.uv = (1.0 - p.t) * mesh.uvs[a] + p.t * mesh.uvs[b];
      if (mesh.has_skin()) v.skin = interpolate_skin(mesh.skin[a], mesh.skin[b], p.t);
      v.id = split.add_vertex(v.position, v.normal, v.uv, v.skin);
      out.added_vertices.push_back(v);
      return it->second = v.id;
    };

    std::vector<VertexId> pos, neg;
    for (const auto& p : clip.split.positive) pos.push_back(vertex_for(p));
    for (const auto& p : clip.split.negative) neg.push_back(vertex_for(p));
    split.face_alive[f] = 0;
    triangulate(split, pos);
    triangulate(split, neg);
    ++out.split_faces;
  }
  out.intersection_points = static_cast<int>(out.added_vertices.size());

  const FacePartition part = partition_faces(split, plane);
  out.no_intersection = out.split_faces == 0 && (part.positive.empty() || part.negative.empty());
  out.positive_mesh = extract(split, part.positive, out.positive_source);
  out.negative_mesh = extract(split, part.negative, out.negative_source);

  std::vector<VertexId> in_negative(split.vertex_count(), -1);
  for (VertexId v = 0; v < out.negative_mesh.vertex_count(); ++v) in_negative[out.negative_source[v]] = v;
  for (VertexId v = 0; v < out.positive_mesh.vertex_count(); ++v)
    if (const VertexId n = in_negative[out.positive_source[v]]; n >= 0) out.seam_vertex_pairs.emplace_back(v, n);
  return out;
}

}  // namespace softcut
