#include "softcut/sections.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <string>

namespace softcut {

namespace {

void split(const TriMesh& mesh, std::vector<FaceId>& faces, std::size_t lo, std::size_t hi, std::size_t target,
           std::vector<std::vector<FaceId>>& leaves) {
  if (hi - lo <= target) {
    leaves.emplace_back(faces.begin() + static_cast<long>(lo), faces.begin() + static_cast<long>(hi));
    return;
  }
  Aabbd box;
  for (std::size_t i = lo; i < hi; ++i) box.extend(mesh.face_bounds(faces[i]));
  int axis = 0;
  box.extent().maxCoeff(&axis);
  auto centroid = [&](FaceId f) {
    const Face& t = mesh.faces[f];
    return mesh.positions[t[0]][axis] + mesh.positions[t[1]][axis] + mesh.positions[t[2]][axis];
  };
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(faces.begin() + static_cast<long>(lo), faces.begin() + static_cast<long>(mid),
                   faces.begin() + static_cast<long>(hi), [&](FaceId a, FaceId b) {
                     const double ca = centroid(a), cb = centroid(b);
                     return ca < cb || (ca == cb && a < b);
                   });
  split(mesh, faces, lo, mid, target, leaves);
  split(mesh, faces, mid, hi, target, leaves);
}

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void add_face_vertices(MeshSection& s, const TriMesh& mesh, FaceId f) {
  for (int k = 0; k < 3; ++k) insert_sorted(s.vertex_ids, mesh.faces[f][k]);
}

}  // namespace

bool aabb_may_touch_box(const Aabbd& aabb, const TearBox& box, double margin) {
  for (const Planed& pl : box.planes)
    if (aabb.min_signed_distance(pl) > margin) return false;
  return true;
}

MeshSections build_sections(const TriMesh& mesh, int target_faces_per_section) {
  const int target = std::max(1, target_faces_per_section);
  std::vector<FaceId> faces;
  for (FaceId f = 0; f < mesh.face_count(); ++f)
    if (mesh.alive(f)) faces.push_back(f);

  std::vector<std::vector<FaceId>> leaves;
  if (!faces.empty()) split(mesh, faces, 0, faces.size(), static_cast<std::size_t>(target), leaves);

  MeshSections out;
  out.epoch = mesh.epoch;
  out.target_faces = target;
  out.sections.resize(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (FaceId f : leaves[i]) out.sections[i].aabb.extend(mesh.face_bounds(f));

  // Overlap pass: list each face in every section whose box it touches.
  for (FaceId f : faces) {
    const Aabbd fb = mesh.face_bounds(f);
    for (MeshSection& s : out.sections)
      if (s.aabb.overlaps(fb)) s.face_ids.push_back(f);
  }
  for (MeshSection& s : out.sections) {
    for (FaceId f : s.face_ids)
      for (int k = 0; k < 3; ++k) s.vertex_ids.push_back(mesh.faces[f][k]);
    std::sort(s.vertex_ids.begin(), s.vertex_ids.end());
    s.vertex_ids.erase(std::unique(s.vertex_ids.begin(), s.vertex_ids.end()), s.vertex_ids.end());
  }
  return out;
}

void refresh_sections(MeshSections& sections, const TriMesh& mesh, const MeshDelta& delta) {
  if (sections.epoch != delta.base_epoch) throw Error(ErrorKind::StaleSections, "sections are not at the delta's base epoch");
  if (!delta.removed_faces.empty()) {
    std::vector<FaceId> removed = delta.removed_faces;
    std::sort(removed.begin(), removed.end());
    for (MeshSection& s : sections.sections) {
      std::vector<FaceId> kept;
      kept.reserve(s.face_ids.size());
      std::set_difference(s.face_ids.begin(), s.face_ids.end(), removed.begin(), removed.end(), std::back_inserter(kept));
      s.face_ids = std::move(kept);
    }
  }
  for (const AddedFace& af : delta.added_faces) {
    const Aabbd fb = mesh.face_bounds(af.id);
    bool placed = false;
    for (MeshSection& s : sections.sections) {
      if (!s.aabb.overlaps(fb)) continue;
      insert_sorted(s.face_ids, af.id);
      add_face_vertices(s, mesh, af.id);
      placed = true;
    }
    if (placed) continue;
    if (sections.sections.empty()) sections.sections.emplace_back();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sections.sections.size(); ++i) {
      const Aabbd& a = sections.sections[i].aabb;
      const double d = a.empty() ? std::numeric_limits<double>::max() : (a.center() - fb.center()).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    MeshSection& s = sections.sections[best];
    s.aabb.extend(fb);
    insert_sorted(s.face_ids, af.id);
    add_face_vertices(s, mesh, af.id);
  }
  sections.epoch = delta.epoch;
}

std::vector<FaceId> sections_touching(const MeshSections& sections, const TriMesh& mesh, std::span<const TearBox> boxes,
                                      double margin) {
  if (sections.epoch != mesh.epoch)
    throw Error(ErrorKind::StaleSections, "sections built for epoch " + std::to_string(sections.epoch) +
                                              ", mesh is at " + std::to_string(mesh.epoch));
  std::vector<FaceId> out;
  for (const TearBox& box : boxes) {
    const Aabbd box_bounds = box.bounds().inflated(margin);
    if (box_bounds.empty()) continue;
    for (const MeshSection& s : sections.sections) {
      if (!s.aabb.overlaps(box_bounds) || !aabb_may_touch_box(s.aabb, box, margin)) continue;
      for (FaceId f : s.face_ids) {
        if (!mesh.alive(f)) continue;
        const Aabbd fb = mesh.face_bounds(f);
        if (fb.overlaps(box_bounds) && aabb_may_touch_box(fb, box, margin)) out.push_back(f);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace softcut
