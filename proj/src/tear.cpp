#include "softcut/tear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "softcut/skinning.hpp"

namespace softcut {

namespace {

// New vertices of one segment, keyed by the edge and box plane they were cut
// on. A vertex cut from a piece of an original edge is re-expressed on that
// edge so every face sharing the edge sees the same parents.
class VertexPool {
 public:
  VertexPool(const TriMesh& mesh, bool interpolate_skin)
      : mesh_(mesh), base_(mesh.vertex_count()), skin_(interpolate_skin && mesh.has_skin()) {}

  VertexId base() const { return base_; }

  const Vec3d& position(VertexId v) const {
    return v < base_ ? mesh_.positions[v] : added_[v - base_].position;
  }

  VertexId get(VertexId a, VertexId b, int plane, double t, const Vec3d& point) {
    const auto key = std::make_tuple(std::min(a, b), std::max(a, b), plane);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    AddedVertex v;
    v.id = base_ + static_cast<VertexId>(added_.size());
    v.position = point;
    if (const auto edge = common_edge(a, b)) {
      const auto& [u, w] = *edge;
      const double ta = param(a, u, w), tb = param(b, u, w);
      v.parent_a = u;
      v.parent_b = w;
      v.t = (1.0 - t) * ta + t * tb;
    } else {
      v.parent_a = a;
      v.parent_b = b;
      v.t = t;
    }
    const VertexId pa = v.parent_a, pb = v.parent_b;
    const double s = v.t;
    const Vec3d n = (1.0 - s) * normal(pa) + s * normal(pb);
    v.normal = n.norm() > 0.0 ? Vec3d(n.normalized()) : normal(pa);
    v.uv = (1.0 - s) * uv(pa) + s * uv(pb);
    if (skin_) v.skin = interpolate_skin(skin(pa), skin(pb), s);
    added_.push_back(std::move(v));
    planes_.push_back(plane);
    index_.emplace(key, added_.back().id);
    return added_.back().id;
  }

  const std::vector<AddedVertex>& added() const { return added_; }
  const std::vector<int>& planes() const { return planes_; }

 private:
  // Original edge (u, w) both vertices lie on, if any.
  std::optional<std::pair<VertexId, VertexId>> common_edge(VertexId a, VertexId b) const {
    auto edge_of = [&](VertexId v) -> std::optional<std::pair<VertexId, VertexId>> {
      if (v < base_) return std::nullopt;
      const AddedVertex& x = added_[v - base_];
      if (x.parent_a < base_ && x.parent_b < base_) return std::make_pair(x.parent_a, x.parent_b);
      return std::nullopt;
    };
    const auto ea = edge_of(a), eb = edge_of(b);
    if (a < base_ && b < base_) return std::make_pair(a, b);
    if (a < base_ && eb && (eb->first == a || eb->second == a)) return eb;
    if (b < base_ && ea && (ea->first == b || ea->second == b)) return ea;
    if (ea && eb && std::minmax(ea->first, ea->second) == std::minmax(eb->first, eb->second)) return ea;
    return std::nullopt;
  }

  double param(VertexId v, VertexId u, VertexId w) const {
    if (v == u) return 0.0;
    if (v == w) return 1.0;
    const AddedVertex& x = added_[v - base_];
    return x.parent_a == u ? x.t : 1.0 - x.t;
  }

  const Vec3d& normal(VertexId v) const { return v < base_ ? mesh_.normals[v] : added_[v - base_].normal; }
  const Vec2d& uv(VertexId v) const { return v < base_ ? mesh_.uvs[v] : added_[v - base_].uv; }
  const SkinWeights& skin(VertexId v) const { return v < base_ ? mesh_.skin[v] : added_[v - base_].skin; }

  const TriMesh& mesh_;
  VertexId base_;
  bool skin_;
  std::vector<AddedVertex> added_;
  std::vector<int> planes_;
  std::map<std::tuple<VertexId, VertexId, int>, VertexId> index_;
};

double orient(const Vec2d& a, const Vec2d& b, const Vec2d& c) {
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

// Ear clipping of a counter-clockwise ring (which may revisit a vertex, as
// bridged or pinched rings do). Among the valid ears the one with the
// shortest closing diagonal goes first, ties to the lower vertex ids, so a
// convex quad is split along its shorter diagonal.
void ear_clip(std::vector<VertexId> ids, std::vector<Vec2d> pts, double eps, std::vector<Face>& out) {
  auto inside_closed = [&](const Vec2d& q, const Vec2d& a, const Vec2d& b, const Vec2d& c) {
    return orient(a, b, q) >= -eps * (b - a).norm() && orient(b, c, q) >= -eps * (c - b).norm() &&
           orient(c, a, q) >= -eps * (a - c).norm();
  };
  while (ids.size() > 3) {
    const int n = static_cast<int>(ids.size());
    int best = -1;
    double best_len = std::numeric_limits<double>::infinity();
    std::pair<VertexId, VertexId> best_key{0, 0};
    for (int i = 0; i < n; ++i) {
      const int ip = (i + n - 1) % n, in = (i + 1) % n;
      const Vec2d &a = pts[ip], &b = pts[i], &c = pts[in];
      if (orient(a, b, c) <= eps * (c - a).norm()) continue;
      bool blocked = false;
      for (int j = 0; j < n && !blocked; ++j) {
        if (ids[j] == ids[ip] || ids[j] == ids[i] || ids[j] == ids[in]) continue;
        blocked = inside_closed(pts[j], a, b, c);
      }
      if (blocked) continue;
      const double len = (c - a).squaredNorm();
      const std::pair<VertexId, VertexId> key = std::minmax(ids[ip], ids[in]);
      if (len < best_len || (len == best_len && key < best_key)) {
        best = i;
        best_len = len;
        best_key = key;
      }
    }
    if (best < 0) return;  // only degenerate slivers remain
    const int bp = (best + n - 1) % n, bn = (best + 1) % n;
    out.emplace_back(ids[bp], ids[best], ids[bn]);
    ids.erase(ids.begin() + best);
    pts.erase(pts.begin() + best);
  }
  if (ids.size() == 3 && orient(pts[0], pts[1], pts[2]) > eps * (pts[2] - pts[0]).norm())
    out.emplace_back(ids[0], ids[1], ids[2]);
}

enum class ClipOutcome { Untouched, Removed, Split };

struct ClippedFace {
  ClipOutcome outcome = ClipOutcome::Untouched;
  std::vector<Face> outside;
};

bool segments_cross(const Vec2d& a, const Vec2d& b, const Vec2d& c, const Vec2d& d) {
  const double d1 = orient(a, b, c), d2 = orient(a, b, d), d3 = orient(c, d, a), d4 = orient(c, d, b);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Face minus the box: the part of the face inside the closed box (a convex
// polygon R) is found by clipping against the six planes; the rest of the
// face is triangulated without creating any vertex off the box boundary.
ClippedFace clip_face(const TriMesh& mesh, FaceId f, const TearBox& box, VertexPool& pool, double eps,
                      double eps_area) {
  ClippedFace out;
  const Face& face = mesh.faces[f];
  // Barycentric coordinates w.r.t. the face travel with the loop so we know
  // exactly which region vertices sit on a face edge.
  std::vector<VertexId> loop = {face[0], face[1], face[2]};
  std::vector<Vec3d> bary = {Vec3d::UnitX(), Vec3d::UnitY(), Vec3d::UnitZ()};
  std::vector<Vec3d> pts;
  bool split_any = false;
  for (int p = 0; p < kBoxPlanes; ++p) {
    pts.clear();
    for (VertexId v : loop) pts.push_back(pool.position(v));
    const PolygonSplit<double> split = split_polygon<double>(pts, box.planes[p], eps);
    if (!split.straddles) {
      if (split.negative.empty()) return out;  // face misses the box
      continue;
    }
    std::vector<VertexId> next;
    std::vector<Vec3d> next_bary;
    for (const SplitPoint<double>& s : split.negative) {
      if (s.is_corner()) {
        next.push_back(loop[s.corner]);
        next_bary.push_back(bary[s.corner]);
      } else {
        next.push_back(pool.get(loop[s.a], loop[s.b], p, s.t, s.point));
        next_bary.push_back((1.0 - s.t) * bary[s.a] + s.t * bary[s.b]);
      }
    }
    loop = std::move(next);
    bary = std::move(next_bary);
    split_any = true;
  }
  pts.clear();
  for (VertexId v : loop) pts.push_back(pool.position(v));
  if (polygon_area<double>(pts) <= eps_area) return out;  // box only grazes the face
  if (!split_any) {
    out.outcome = ClipOutcome::Removed;
    return out;
  }
  out.outcome = ClipOutcome::Split;

  const std::array<Vec3d, 3> corner = mesh.face_points(f);
  const Vec3d normal = (corner[1] - corner[0]).cross(corner[2] - corner[0]).normalized();
  const Vec3d e1 = (corner[1] - corner[0]).normalized();
  const Vec3d e2 = normal.cross(e1);
  auto flat = [&](VertexId v) {
    const Vec3d d = pool.position(v) - corner[0];
    return Vec2d(d.dot(e1), d.dot(e2));
  };

  // Face boundary with the region's contact vertices inserted in order.
  std::vector<VertexId> ring;
  std::vector<char> contact;
  auto in_region = [&](VertexId v) { return std::find(loop.begin(), loop.end(), v) != loop.end(); };
  for (int e = 0; e < 3; ++e) {
    ring.push_back(face[e]);
    contact.push_back(in_region(face[e]));
    std::vector<std::pair<double, VertexId>> on_edge;
    for (std::size_t i = 0; i < loop.size(); ++i)
      if (loop[i] >= pool.base() && bary[i][(e + 2) % 3] == 0.0) on_edge.emplace_back(bary[i][(e + 1) % 3], loop[i]);
    std::sort(on_edge.begin(), on_edge.end());
    for (const auto& [t, v] : on_edge) {
      ring.push_back(v);
      contact.push_back(1);
    }
  }

  std::vector<std::vector<VertexId>> polygons;
  const int nr = static_cast<int>(ring.size());
  const int nl = static_cast<int>(loop.size());
  auto loop_index = [&](VertexId v) {
    return static_cast<int>(std::find(loop.begin(), loop.end(), v) - loop.begin());
  };
  std::vector<int> contacts;
  for (int i = 0; i < nr; ++i)
    if (contact[i]) contacts.push_back(i);

  if (contacts.empty()) {
    // Region floats inside the face: bridge it to the nearest corner it can see.
    std::vector<Vec2d> lp;
    for (VertexId v : loop) lp.push_back(flat(v));
    int best_c = -1, best_r = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < nl; ++r) {
        const Vec2d a = flat(face[c]);
        bool clear = true;
        for (int k = 0; k < nl && clear; ++k) {
          const int k1 = (k + 1) % nl;
          if (k == r || k1 == r) continue;
          clear = !segments_cross(a, lp[r], lp[k], lp[k1]);
        }
        // The bridge must leave the region outward.
        const Vec2d& prev = lp[(r + nl - 1) % nl];
        const Vec2d& nxt = lp[(r + 1) % nl];
        clear = clear && (orient(prev, lp[r], a) < 0.0 || orient(lp[r], nxt, a) < 0.0);
        const double d = (a - lp[r]).squaredNorm();
        if (clear && d < best_d) {
          best_d = d;
          best_c = c;
          best_r = r;
        }
      }
    if (best_c < 0) throw Error(ErrorKind::Internal, "no bridge from the clipped region to its face");
    std::vector<VertexId> poly;
    for (int k = 0; k <= 3; ++k) poly.push_back(face[(best_c + k) % 3]);
    for (int k = 0; k <= nl; ++k) poly.push_back(loop[((best_r - k) % nl + nl) % nl]);
    polygons.push_back(std::move(poly));
  } else {
    const int nc = static_cast<int>(contacts.size());
    for (int k = 0; k < nc; ++k) {
      const int start = contacts[k], end = contacts[(k + 1) % nc];
      std::vector<VertexId> poly;
      for (int i = start;; i = (i + 1) % nr) {
        poly.push_back(ring[i]);
        if (i == end && (poly.size() > 1 || nc > 1)) break;
        if (poly.size() > static_cast<std::size_t>(nr) + 1) break;
      }
      // Back along the region, clockwise, from end to start (exclusive).
      const int rs = loop_index(ring[start]), re = loop_index(ring[end]);
      for (int i = (re + nl - 1) % nl; i != rs; i = (i + nl - 1) % nl) poly.push_back(loop[i]);
      if (poly.size() >= 3) polygons.push_back(std::move(poly));
    }
  }

  for (const std::vector<VertexId>& poly : polygons) {
    std::vector<Vec2d> flat_pts;
    for (VertexId v : poly) flat_pts.push_back(flat(v));
    ear_clip(poly, flat_pts, eps, out.outside);
  }
  return out;
}

bool on_edge_interior(const Vec3d& p, const Vec3d& a, const Vec3d& b, double eps, double& t) {
  const Vec3d e = b - a;
  const double len2 = e.squaredNorm();
  if (len2 <= eps * eps) return false;
  t = (p - a).dot(e) / len2;
  const double len = std::sqrt(len2);
  if (t * len <= eps || (1.0 - t) * len <= eps) return false;
  return (a + t * e - p).norm() <= eps;
}

// Fans every edge carrying hanging vertices from the opposite corner, then
// recurses into the pieces for hangers on the other edges.
void split_hanging(const TriMesh& mesh, const Face& face, std::vector<VertexId> hangers, double eps,
                   std::vector<Face>& out) {
  for (int e = 0; e < 3; ++e) {
    const VertexId a = face[e], b = face[(e + 1) % 3], o = face[(e + 2) % 3];
    std::vector<std::pair<double, VertexId>> on_edge;
    std::vector<VertexId> rest;
    for (VertexId h : hangers) {
      double t = 0.0;
      if (h != a && h != b && h != o && on_edge_interior(mesh.positions[h], mesh.positions[a], mesh.positions[b], eps, t))
        on_edge.emplace_back(t, h);
      else
        rest.push_back(h);
    }
    if (on_edge.empty()) continue;
    std::sort(on_edge.begin(), on_edge.end());
    std::vector<VertexId> chain = {a};
    for (const auto& [t, h] : on_edge) chain.push_back(h);
    chain.push_back(b);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      split_hanging(mesh, Face(chain[i], chain[i + 1], o), rest, eps, out);
    return;
  }
  out.push_back(face);
}

void check_manifold(const TriMesh& mesh, const MeshDelta& delta, std::span<const FaceId> candidates) {
  std::map<std::pair<VertexId, VertexId>, int> watched;
  for (const AddedFace& af : delta.added_faces)
    for (int k = 0; k < 3; ++k) watched.emplace(std::minmax(af.vertices[k], af.vertices[(k + 1) % 3]), 0);
  std::vector<FaceId> faces(candidates.begin(), candidates.end());
  for (const AddedFace& af : delta.added_faces) faces.push_back(af.id);
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  for (FaceId f : faces) {
    if (!mesh.alive(f)) continue;
    for (int k = 0; k < 3; ++k) {
      auto it = watched.find(std::minmax(mesh.faces[f][k], mesh.faces[f][(k + 1) % 3]));
      if (it != watched.end() && ++it->second > 2)
        throw Error(ErrorKind::NonManifoldResult,
                    "edge " + std::to_string(it->first.first) + "-" + std::to_string(it->first.second) +
                        " would be shared by more than two faces");
    }
  }
}

}  // namespace

bool band_test(std::span<const Vec3d> points, int plane, const TearBox& box, double eps) {
  for (int q = 0; q < kBoxPlanes; ++q) {
    if (q == plane || q == opposite(plane)) continue;
    for (const Vec3d& p : points)
      if (box.planes[q].signed_distance(p) > eps) return false;
  }
  return true;
}

bool prune_search_list(const TriMesh& mesh, FaceId face, const TearBox& box, double reach) {
  return aabb_may_touch_box(mesh.face_bounds(face), box, reach);
}

MeshDelta second_pass(const TriMesh& mesh, const MeshDelta& first_pass, std::span<const FaceId> candidates) {
  const double eps = mesh.eps_side();
  MeshDelta amend;
  amend.base_epoch = mesh.epoch;
  amend.epoch = mesh.epoch;
  if (first_pass.added_vertices.empty()) return compose(first_pass, amend);

  // Only vertices some new face uses can hang; unused parents stay detached.
  std::vector<VertexId> fresh;
  const VertexId first_new = first_pass.added_vertices.front().id;
  for (const AddedFace& af : first_pass.added_faces)
    for (int k = 0; k < 3; ++k)
      if (af.vertices[k] >= first_new) fresh.push_back(af.vertices[k]);
  std::sort(fresh.begin(), fresh.end());
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  Aabbd fresh_box;
  for (VertexId v : fresh) fresh_box.extend(mesh.positions[v]);
  fresh_box = fresh_box.inflated(eps);

  std::vector<FaceId> faces(candidates.begin(), candidates.end());
  for (const AddedFace& af : first_pass.added_faces) faces.push_back(af.id);
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

  FaceId next_id = mesh.face_count();
  for (FaceId f : faces) {
    if (!mesh.alive(f)) continue;
    const Aabbd fb = mesh.face_bounds(f).inflated(eps);
    if (!fb.overlaps(fresh_box)) continue;
    const Face& face = mesh.faces[f];
    std::vector<VertexId> hangers;
    for (VertexId v : fresh) {
      if (v == face[0] || v == face[1] || v == face[2]) continue;
      const Vec3d& p = mesh.positions[v];
      if (!fb.overlaps(Aabbd{p, p})) continue;
      for (int e = 0; e < 3; ++e) {
        double t = 0.0;
        if (on_edge_interior(p, mesh.positions[face[e]], mesh.positions[face[(e + 1) % 3]], eps, t)) {
          hangers.push_back(v);
          break;
        }
      }
    }
    if (hangers.empty()) continue;
    std::vector<Face> pieces;
    split_hanging(mesh, face, hangers, eps, pieces);
    amend.removed_faces.push_back(f);
    for (const Face& piece : pieces) amend.added_faces.push_back({next_id++, piece});
  }
  return compose(first_pass, amend);
}

void fill_skin_weights(TriMesh& mesh, MeshDelta& delta) {
  if (!mesh.has_skin()) return;
  for (AddedVertex& v : delta.added_vertices) {
    if (!v.skin.empty() || v.parent_a < 0) continue;
    v.skin = interpolate_skin(mesh.skin[v.parent_a], mesh.skin[v.parent_b], v.t);
    if (v.id < static_cast<VertexId>(mesh.skin.size())) mesh.skin[v.id] = v.skin;
  }
}

MeshDelta tear_segment(TriMesh& mesh, MeshSections& sections, const TearBox& box, TearState& state,
                       const TearOptions& options) {
  const double eps = mesh.eps_side();
  const double eps_area = mesh.eps_area();
  const std::uint64_t base = mesh.epoch;

  std::vector<FaceId> candidates = sections_touching(sections, mesh, std::span(&box, 1), eps);
  for (FaceId f : state.search_list)
    if (f < mesh.face_count() && mesh.alive(f)) candidates.push_back(f);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  VertexPool pool(mesh, options.interpolate_skin);
  MeshDelta first;
  first.base_epoch = base;
  first.epoch = base + 1;
  std::vector<Face> faces;
  for (FaceId f : candidates) {
    ClippedFace clipped = clip_face(mesh, f, box, pool, eps, eps_area);
    if (clipped.outcome == ClipOutcome::Untouched) continue;
    first.removed_faces.push_back(f);
    for (const Face& t : clipped.outside)
      if (triangle_area(pool.position(t[0]), pool.position(t[1]), pool.position(t[2])) > eps_area) faces.push_back(t);
  }

  // Emit the new vertices faces use, plus any interior parent they were
  // interpolated from; renumber them densely in creation order.
  const VertexId vbase = pool.base();
  const std::size_t pooled = pool.added().size();
  std::vector<char> used(pooled, 0), keep(pooled, 0);
  for (const Face& t : faces)
    for (int k = 0; k < 3; ++k)
      if (t[k] >= vbase) used[t[k] - vbase] = keep[t[k] - vbase] = 1;
  for (std::size_t i = pooled; i-- > 0;) {
    if (!keep[i]) continue;
    for (VertexId parent : {pool.added()[i].parent_a, pool.added()[i].parent_b})
      if (parent >= vbase) keep[parent - vbase] = 1;
  }
  std::vector<VertexId> renumber(pooled, -1);
  std::vector<RimVertex> rim;
  const int box_index = static_cast<int>(state.boxes_so_far.size());
  for (std::size_t i = 0; i < pooled; ++i) {
    if (!keep[i]) continue;
    renumber[i] = vbase + static_cast<VertexId>(first.added_vertices.size());
    AddedVertex v = pool.added()[i];
    v.id = renumber[i];
    if (v.parent_a >= vbase) v.parent_a = renumber[v.parent_a - vbase];
    if (v.parent_b >= vbase) v.parent_b = renumber[v.parent_b - vbase];
    first.added_vertices.push_back(std::move(v));
    if (used[i]) rim.push_back({renumber[i], box_index, pool.planes()[i]});
  }
  for (Face& t : faces) {
    for (int k = 0; k < 3; ++k)
      if (t[k] >= vbase) t[k] = renumber[t[k] - vbase];
    first.added_faces.push_back({mesh.face_count() + static_cast<FaceId>(first.added_faces.size()), t});
  }

  apply_delta(mesh, first);
  MeshDelta delta = second_pass(mesh, first, candidates);
  revert_delta(mesh, first);
  delta.base_epoch = base;
  delta.epoch = base + 1;
  apply_delta(mesh, delta);
  try {
    check_manifold(mesh, delta, candidates);
  } catch (...) {
    revert_delta(mesh, delta);
    throw;
  }
  refresh_sections(sections, mesh, delta);

  state.boxes_so_far.push_back(box);
  state.rim_vertices = std::move(rim);

  state.touched_vertices.clear();
  for (const AddedFace& af : delta.added_faces)
    for (int k = 0; k < 3; ++k) state.touched_vertices.push_back(af.vertices[k]);
  std::sort(state.touched_vertices.begin(), state.touched_vertices.end());
  state.touched_vertices.erase(std::unique(state.touched_vertices.begin(), state.touched_vertices.end()),
                               state.touched_vertices.end());

  std::vector<FaceId> search;
  for (FaceId f : candidates)
    if (mesh.alive(f)) search.push_back(f);
  for (const AddedFace& af : delta.added_faces)
    if (mesh.alive(af.id)) search.push_back(af.id);
  if (options.prune_search_list) {
    const double reach = options.next_reach > 0.0
                             ? options.next_reach
                             : (box.segment_span[1] - box.segment_span[0]).norm() + box.width;
    std::erase_if(search, [&](FaceId f) { return !prune_search_list(mesh, f, box, reach); });
  }
  std::sort(search.begin(), search.end());
  search.erase(std::unique(search.begin(), search.end()), search.end());
  state.search_list = std::move(search);
  return delta;
}

StrokeSampling default_sampling(const TriMesh& mesh) {
  return {0.02 * mesh.bounds().diagonal(), 25.0};
}

std::vector<ScalpelSample> StrokeSampler::push(const ScalpelSample& raw) {
  std::vector<ScalpelSample> out;
  if (raw_.empty()) {
    raw_.push_back(raw);
    last_kept_ = raw;
    last_raw_kept_ = true;
    out.push_back(raw);
    return out;
  }
  const Vec3d step = raw.tip - raw_.back().tip;
  if (step.norm() > 0.0) {
    // Turn at the previous raw pose, now that the motion out of it is known.
    if (!last_raw_kept_ && last_direction_.norm() > 0.0) {
      const double c = std::clamp(last_direction_.dot(step.normalized()), -1.0, 1.0);
      const double angle = std::acos(c) * 180.0 / std::numbers::pi;
      if (angle > params_.angle_threshold_deg) {
        last_kept_ = raw_.back();
        out.push_back(raw_.back());
      }
    }
    last_direction_ = step.normalized();
  }
  raw_.push_back(raw);
  last_raw_kept_ = false;
  if ((raw.tip - last_kept_->tip).norm() >= params_.distance_threshold && (raw.tip - last_kept_->tip).norm() > 0.0) {
    last_kept_ = raw;
    last_raw_kept_ = true;
    out.push_back(raw);
  }
  return out;
}

std::vector<ScalpelSample> StrokeSampler::finish() {
  std::vector<ScalpelSample> out;
  if (!raw_.empty() && !last_raw_kept_ && (raw_.back().tip - last_kept_->tip).norm() > 0.0) {
    last_kept_ = raw_.back();
    last_raw_kept_ = true;
    out.push_back(raw_.back());
  }
  return out;
}

std::vector<ScalpelSample> sample_stroke(std::span<const ScalpelSample> raw, StrokeSampling params) {
  StrokeSampler sampler(params);
  std::vector<ScalpelSample> out;
  for (const ScalpelSample& s : raw) {
    auto kept = sampler.push(s);
    out.insert(out.end(), kept.begin(), kept.end());
  }
  auto kept = sampler.finish();
  out.insert(out.end(), kept.begin(), kept.end());
  return out;
}

std::vector<TearBox> TearStroke::ready(bool final) {
  const std::vector<ScalpelSample> usable = usable_samples(samples_);
  if (usable.size() < 2) return {};
  // Box k is final once sample k+2 exists (its exit interface depends on it).
  const std::size_t total = usable.size() - 1;
  const std::size_t available = final ? total : (usable.size() >= 3 ? usable.size() - 2 : 0);
  if (available <= emitted_) return {};
  const std::vector<TearBox> boxes = build_tear_boxes(usable, width_);
  std::vector<TearBox> out(boxes.begin() + static_cast<long>(emitted_), boxes.begin() + static_cast<long>(available));
  emitted_ = available;
  return out;
}

std::vector<TearBox> TearStroke::push(const ScalpelSample& sample) {
  samples_.push_back(sample);
  return ready(false);
}

std::vector<TearBox> TearStroke::finish() { return ready(true); }

double TearStroke::next_reach(std::size_t box_index) const {
  const std::vector<ScalpelSample> usable = usable_samples(samples_);
  double spacing = 0.0;
  for (std::size_t i = box_index; i + 1 < usable.size() && i <= box_index + 1; ++i)
    spacing = std::max(spacing, (usable[i + 1].tip - usable[i].tip).norm());
  return spacing + width_;
}

}  // namespace softcut
