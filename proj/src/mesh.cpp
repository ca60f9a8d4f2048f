#include "softcut/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace softcut {

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

int TriMesh::live_face_count() const {
  return static_cast<int>(std::count(face_alive.begin(), face_alive.end(), std::uint8_t{1}));
}

double TriMesh::face_area(FaceId f) const {
  const auto p = face_points(f);
  return triangle_area(p[0], p[1], p[2]);
}

Aabbd TriMesh::face_bounds(FaceId f) const {
  Aabbd box;
  for (int k = 0; k < 3; ++k) box.extend(positions[faces[f][k]]);
  return box;
}

Aabbd TriMesh::bounds() const {
  Aabbd box;
  for (FaceId f = 0; f < face_count(); ++f)
    if (alive(f)) box.extend(face_bounds(f));
  return box;
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (FaceId f = 0; f < face_count(); ++f)
    if (alive(f)) a += face_area(f);
  return a;
}

VertexId TriMesh::add_vertex(const Vec3d& p, const Vec3d& n, const Vec2d& uv, SkinWeights w) {
  positions.push_back(p);
  normals.push_back(n);
  uvs.push_back(uv);
  if (has_skin()) skin.push_back(std::move(w));
  return vertex_count() - 1;
}

FaceId TriMesh::add_face(const Face& f) {
  faces.push_back(f);
  face_alive.push_back(1);
  return face_count() - 1;
}

void TriMesh::refresh_tolerance_scale() {
  const double d = bounds().diagonal();
  tolerance_scale = d > 0.0 ? d : 1.0;
}

void apply_delta(TriMesh& mesh, const MeshDelta& delta) {
  if (mesh.epoch != delta.base_epoch)
    throw Error(ErrorKind::Internal, "delta base epoch " + std::to_string(delta.base_epoch) +
                                         " does not match mesh epoch " + std::to_string(mesh.epoch));
  for (const AddedVertex& v : delta.added_vertices) {
    if (v.id != mesh.vertex_count()) throw Error(ErrorKind::Internal, "delta vertex id out of sequence");
    mesh.add_vertex(v.position, v.normal, v.uv, v.skin);
  }
  for (FaceId f : delta.removed_faces) {
    if (f < 0 || f >= mesh.face_count() || !mesh.alive(f))
      throw Error(ErrorKind::Internal, "delta removes a face that is not live: " + std::to_string(f));
    mesh.face_alive[f] = 0;
  }
  for (const AddedFace& af : delta.added_faces) {
    if (af.id < 0) throw Error(ErrorKind::Internal, "negative face id in delta");
    if (af.id >= mesh.face_count()) {
      mesh.faces.resize(af.id + 1, Face::Zero());
      mesh.face_alive.resize(af.id + 1, 0);
    } else if (mesh.alive(af.id)) {
      throw Error(ErrorKind::Internal, "delta overwrites live face " + std::to_string(af.id));
    }
    mesh.faces[af.id] = af.vertices;
    mesh.face_alive[af.id] = 1;
  }
  mesh.epoch = delta.epoch;
}

void revert_delta(TriMesh& mesh, const MeshDelta& delta) {
  if (mesh.epoch != delta.epoch) throw Error(ErrorKind::Internal, "revert_delta on a mesh at the wrong epoch");
  FaceId lowest_added = mesh.face_count();
  for (const AddedFace& af : delta.added_faces) {
    mesh.face_alive[af.id] = 0;
    lowest_added = std::min(lowest_added, af.id);
  }
  for (FaceId f : delta.removed_faces) mesh.face_alive[f] = 1;
  while (mesh.face_count() > lowest_added && !mesh.face_alive.back()) {
    mesh.faces.pop_back();
    mesh.face_alive.pop_back();
  }
  const std::size_t keep = mesh.positions.size() - delta.added_vertices.size();
  mesh.positions.resize(keep);
  mesh.normals.resize(keep);
  mesh.uvs.resize(keep);
  if (mesh.has_skin()) mesh.skin.resize(keep);
  mesh.epoch = delta.base_epoch;
}

MeshDelta compose(const MeshDelta& first, const MeshDelta& second) {
  MeshDelta out;
  out.base_epoch = first.base_epoch;
  out.epoch = second.epoch;
  out.added_vertices = first.added_vertices;
  out.added_vertices.insert(out.added_vertices.end(), second.added_vertices.begin(), second.added_vertices.end());

  std::unordered_set<FaceId> added_by_first;
  for (const AddedFace& f : first.added_faces) added_by_first.insert(f.id);
  std::unordered_set<FaceId> removed_by_second(second.removed_faces.begin(), second.removed_faces.end());

  out.removed_faces = first.removed_faces;
  for (FaceId f : second.removed_faces)
    if (!added_by_first.count(f)) out.removed_faces.push_back(f);
  for (const AddedFace& f : first.added_faces)
    if (!removed_by_second.count(f.id)) out.added_faces.push_back(f);
  out.added_faces.insert(out.added_faces.end(), second.added_faces.begin(), second.added_faces.end());
  return out;
}

Vec3d face_normal(const TriMesh& mesh, FaceId f) {
  const auto p = mesh.face_points(f);
  return (p[1] - p[0]).cross(p[2] - p[0]).normalized();
}

void recompute_vertex_normals(TriMesh& mesh) {
  std::vector<Vec3d> acc(mesh.vertex_count(), Vec3d::Zero());
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    const auto p = mesh.face_points(f);
    const Vec3d n = (p[1] - p[0]).cross(p[2] - p[0]);  // area weighted
    for (int k = 0; k < 3; ++k) acc[mesh.faces[f][k]] += n;
  }
  mesh.normals.resize(mesh.vertex_count());
  for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
    const double len = acc[v].norm();
    mesh.normals[v] = len > 0.0 ? Vec3d(acc[v] / len) : Vec3d::UnitZ();
  }
}

std::vector<std::array<Vec3d, 3>> live_triangles(const TriMesh& mesh) {
  std::vector<std::array<Vec3d, 3>> out;
  for (FaceId f = 0; f < mesh.face_count(); ++f)
    if (mesh.alive(f)) out.push_back(mesh.face_points(f));
  return out;
}

CompactMesh compact(const TriMesh& mesh) {
  CompactMesh out;
  out.old_to_new.assign(mesh.vertex_count(), -1);
  std::vector<std::uint8_t> used(mesh.vertex_count(), 0);
  for (FaceId f = 0; f < mesh.face_count(); ++f)
    if (mesh.alive(f))
      for (int k = 0; k < 3; ++k) used[mesh.faces[f][k]] = 1;

  TriMesh& m = out.mesh;
  m.tolerance_scale = mesh.tolerance_scale;
  m.epoch = mesh.epoch;
  if (mesh.has_skin()) m.skin.reserve(mesh.vertex_count());
  for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
    if (!used[v]) continue;
    out.old_to_new[v] = m.vertex_count();
    m.positions.push_back(mesh.positions[v]);
    m.normals.push_back(mesh.normals[v]);
    m.uvs.push_back(mesh.uvs[v]);
    if (mesh.has_skin()) m.skin.push_back(mesh.skin[v]);
  }
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    const Face& t = mesh.faces[f];
    m.add_face(Face(out.old_to_new[t[0]], out.old_to_new[t[1]], out.old_to_new[t[2]]));
  }
  return out;
}

std::vector<std::pair<VertexId, VertexId>> non_manifold_edges(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(mesh.face_count() * 3);
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    for (int k = 0; k < 3; ++k) ++count[edge_key(mesh.faces[f][k], mesh.faces[f][(k + 1) % 3])];
  }
  std::vector<std::pair<VertexId, VertexId>> bad;
  for (const auto& [key, n] : count)
    if (n > 2) bad.emplace_back(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu));
  std::sort(bad.begin(), bad.end());
  return bad;
}

std::vector<TJunction> find_t_junctions(const TriMesh& mesh, double eps) {
  std::vector<VertexId> verts = live_vertices(mesh);
  std::sort(verts.begin(), verts.end(), [&](VertexId a, VertexId b) {
    return mesh.positions[a].x() < mesh.positions[b].x() || (mesh.positions[a].x() == mesh.positions[b].x() && a < b);
  });
  std::vector<double> xs(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) xs[i] = mesh.positions[verts[i]].x();

  std::vector<TJunction> out;
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    const Face& t = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      const Vec3d& a = mesh.positions[t[e]];
      const Vec3d& b = mesh.positions[t[(e + 1) % 3]];
      const Vec3d ab = b - a;
      const double len = ab.norm();
      if (len <= 2.0 * eps) continue;
      const double lo = std::min(a.x(), b.x()) - eps;
      const double hi = std::max(a.x(), b.x()) + eps;
      auto it = std::lower_bound(xs.begin(), xs.end(), lo);
      for (std::size_t i = it - xs.begin(); i < xs.size() && xs[i] <= hi; ++i) {
        const VertexId v = verts[i];
        if (v == t[0] || v == t[1] || v == t[2]) continue;
        const Vec3d& p = mesh.positions[v];
        const double s = (p - a).dot(ab) / len;  // distance along the edge
        if (s <= eps || s >= len - eps) continue;
        if ((p - a - (s / len) * ab).norm() > eps) continue;
        out.push_back({v, f, e});
      }
    }
  }
  return out;
}

std::vector<std::string> validate(const TriMesh& mesh) {
  std::vector<std::string> problems;
  const int nv = mesh.vertex_count();
  if (static_cast<int>(mesh.normals.size()) != nv || static_cast<int>(mesh.uvs.size()) != nv)
    problems.push_back("attribute array sizes differ from vertex count");
  if (mesh.has_skin() && static_cast<int>(mesh.skin.size()) != nv) problems.push_back("skin array size mismatch");
  if (mesh.faces.size() != mesh.face_alive.size()) problems.push_back("face_alive size mismatch");
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    const Face& t = mesh.faces[f];
    bool in_range = true;
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nv) in_range = false;
    if (!in_range) {
      problems.push_back("face " + std::to_string(f) + " index out of range");
      continue;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) problems.push_back("face " + std::to_string(f) + " repeats a vertex");
    if (mesh.face_area(f) <= mesh.eps_area()) problems.push_back("face " + std::to_string(f) + " is degenerate");
  }
  if (mesh.has_skin()) {
    for (VertexId v : live_vertices(mesh)) {
      double sum = 0.0;
      for (const BoneWeight& w : mesh.skin[v]) sum += w.weight;
      if (std::abs(sum - 1.0) > 1e-6) problems.push_back("skin weights of vertex " + std::to_string(v) + " sum to " + std::to_string(sum));
    }
  }
  if (!non_manifold_edges(mesh).empty()) problems.push_back("edge shared by more than two faces");
  return problems;
}

std::vector<VertexId> live_vertices(const TriMesh& mesh) {
  std::vector<std::uint8_t> used(mesh.vertex_count(), 0);
  for (FaceId f = 0; f < mesh.face_count(); ++f)
    if (mesh.alive(f))
      for (int k = 0; k < 3; ++k) used[mesh.faces[f][k]] = 1;
  std::vector<VertexId> out;
  for (VertexId v = 0; v < mesh.vertex_count(); ++v)
    if (used[v]) out.push_back(v);
  return out;
}

}  // namespace softcut
