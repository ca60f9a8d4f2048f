#include "doctest.h"

#include <random>

#include "softcut/primitives.hpp"
#include "softcut/sections.hpp"
#include "softcut/clip_oracle.hpp"
#include "support.hpp"

using namespace softcut;

namespace {

bool covers_all(const MeshSections& s, const TriMesh& m) {
  std::vector<char> seen(m.face_count(), 0);
  for (const MeshSection& sec : s.sections)
    for (FaceId f : sec.face_ids) seen[f] = 1;
  for (FaceId f = 0; f < m.face_count(); ++f)
    if (m.alive(f) && !seen[f]) return false;
  return true;
}

// Brute force: faces with material strictly inside the box.
std::vector<FaceId> clipped_faces(const TriMesh& m, const TearBox& box) {
  std::vector<FaceId> out;
  for (FaceId f = 0; f < m.face_count(); ++f) {
    if (!m.alive(f)) continue;
    const std::vector<std::array<Vec3d, 3>> tri = {m.face_points(f)};
    if (oracle_clip_area(tri, std::span(&box, 1)) > 0.0) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("one triangle, one section") {
  TriMesh m;
  m.positions = {Vec3d(0, 0, 0), Vec3d(1, 0, 0), Vec3d(0, 1, 0)};
  m.faces = {Face(0, 1, 2)};
  finish_mesh(m);
  const MeshSections s = build_sections(m, 64);
  REQUIRE(s.sections.size() == 1);
  CHECK(s.sections[0].face_ids == std::vector<FaceId>{0});
  CHECK(s.sections[0].vertex_ids == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("10x10 grid with target 50 gives 4 sections") {
  const TriMesh g = make_grid(10, 10);
  const MeshSections s = build_sections(g, 50);
  REQUIRE(s.sections.size() == 4);
  for (const MeshSection& sec : s.sections) {
    CHECK(sec.face_ids.size() >= 50);
    CHECK(sec.face_ids.size() <= 50 + 2 * 10 + 4);  // boundary duplicates only
  }
  CHECK(covers_all(s, g));
}

TEST_CASE("sections_touching: disjoint box, whole-mesh box, stale epoch") {
  const TriMesh m = make_icosphere(2);
  const MeshSections s = build_sections(m, 32);
  const std::vector<ScalpelSample> far = {{0, Vec3d(9, 9, 9), Vec3d(9, 9, 10)}, {1, Vec3d(10, 9, 9), Vec3d(10, 9, 10)}};
  CHECK(sections_touching(s, m, build_tear_boxes(far, 0.1)).empty());
  const std::vector<ScalpelSample> all = {{0, Vec3d(-3, 0, -3), Vec3d(-3, 0, 3)}, {1, Vec3d(3, 0, -3), Vec3d(3, 0, 3)}};
  CHECK(sections_touching(s, m, build_tear_boxes(all, 10.0)).size() == 320);
  TriMesh moved = m;
  moved.epoch = 5;
  CHECK_THROWS_AS(sections_touching(s, moved, build_tear_boxes(all, 1.0)), Error);
}

TEST_CASE("corner slab on the grid: candidates stay local and cover every clipped face") {
  const TriMesh g = make_grid(10, 10);
  const MeshSections s = build_sections(g, 50);
  const std::vector<ScalpelSample> corner = {{0, Vec3d(-0.1, 0.15, 0), Vec3d(-0.1, 0.15, 1)},
                                             {1, Vec3d(0.3, 0.15, 0), Vec3d(0.3, 0.15, 1)}};
  const auto boxes = build_tear_boxes(corner, 0.1);
  const auto got = sections_touching(s, g, boxes);
  for (FaceId f : clipped_faces(g, boxes[0])) CHECK(std::binary_search(got.begin(), got.end(), f));
  CHECK(got.size() < 100);
}

TEST_CASE("superset property on random boxes") {
  std::mt19937_64 rng(9);
  const std::vector<TriMesh> meshes = {make_icosphere(2), make_ellipsoid(493), make_cube(1.5)};
  for (const TriMesh& m : meshes) {
    const MeshSections s = build_sections(m, 24);
    for (int i = 0; i < 100; ++i) {
      const auto stroke = test::random_sphere_stroke(rng, 1, 0.9, test::uniform(rng, 0.1, 0.6), test::uniform(rng, 0.0, 0.3));
      const auto boxes = build_tear_boxes(stroke, test::uniform(rng, 0.01, 0.3));
      const auto got = sections_touching(s, m, boxes);
      for (FaceId f : clipped_faces(m, boxes[0])) CHECK(std::binary_search(got.begin(), got.end(), f));
    }
  }
}

TEST_CASE("refresh keeps coverage after a delta") {
  TriMesh m = make_grid(4, 4);
  MeshSections s = build_sections(m, 8);
  MeshDelta d;
  d.base_epoch = 0;
  d.epoch = 1;
  AddedVertex c;
  c.id = m.vertex_count();
  c.position = (m.positions[0] + m.positions[1] + m.positions[6]) / 3.0;
  c.parent_a = 0;
  c.parent_b = 6;
  c.t = 0.5;
  d.added_vertices = {c};
  d.removed_faces = {0};
  const Face f0 = m.faces[0];
  d.added_faces = {{m.face_count(), Face(f0[0], f0[1], c.id)},
                   {m.face_count() + 1, Face(f0[1], f0[2], c.id)},
                   {m.face_count() + 2, Face(f0[2], f0[0], c.id)}};
  apply_delta(m, d);
  refresh_sections(s, m, d);
  CHECK(s.epoch == 1);
  CHECK(covers_all(s, m));
  for (const MeshSection& sec : s.sections) CHECK_FALSE(std::binary_search(sec.face_ids.begin(), sec.face_ids.end(), 0));
}
