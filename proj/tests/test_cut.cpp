#include "doctest.h"

#include <random>
#include <set>

#include "softcut/cut.hpp"
#include "softcut/skinning.hpp"
#include "softcut/primitives.hpp"
#include "support.hpp"

using namespace softcut;

namespace {

// Side purity: every vertex of the positive mesh is at or above the plane.
double worst_violation(const TriMesh& m, const Planed& plane, double sign) {
  double worst = 0.0;
  for (const Vec3d& p : m.positions) worst = std::max(worst, -sign * plane.signed_distance(p));
  return worst;
}

void check_result(const TriMesh& mesh, const Planed& plane, const CutResult& r) {
  const double a0 = mesh.total_area();
  const double a1 = r.positive_mesh.total_area() + r.negative_mesh.total_area();
  CHECK(test::relative_error(a1, a0) <= 1e-9);
  CHECK(worst_violation(r.positive_mesh, plane, 1.0) <= mesh.eps_side());
  CHECK(worst_violation(r.negative_mesh, plane, -1.0) <= mesh.eps_side());
  CHECK(non_manifold_edges(r.positive_mesh).empty());
  CHECK(non_manifold_edges(r.negative_mesh).empty());
  CHECK(validate(r.positive_mesh).empty());
  CHECK(validate(r.negative_mesh).empty());
  for (const auto& [p, n] : r.seam_vertex_pairs) CHECK(r.positive_mesh.positions[p] == r.negative_mesh.positions[n]);
}

Planed random_plane(std::mt19937_64& rng, double reach) {
  Vec3d n = test::random_unit(rng);
  const Vec3d through = test::uniform(rng, 0.0, reach) * test::random_unit(rng);
  return Planed::through(through, n);
}

}  // namespace

TEST_CASE("cut plane from three samples") {
  const Planed z0 = cut_plane_from_samples(Vec3d(0, 0, 0), Vec3d(1, 0, 0), Vec3d(0, 1, 0));
  CHECK(z0.normal.isApprox(Vec3d::UnitZ()));
  CHECK(std::abs(z0.offset) < 1e-12);
  const Planed z1 = cut_plane_from_samples(Vec3d(0, 0, 1), Vec3d(1, 0, 1), Vec3d(0, 1, 1));
  CHECK(z1.normal.isApprox(Vec3d::UnitZ()));
  CHECK(z1.offset == doctest::Approx(1.0));
  try {
    cut_plane_from_samples(Vec3d(0, 0, 0), Vec3d(1, 1, 1), Vec3d(2, 2, 2));
    FAIL("expected Collinear");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Collinear);
  }
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Vec3d a = test::random_unit(rng), b = test::random_unit(rng) * 3, c = test::random_unit(rng) * 0.5;
    const Planed p = cut_plane_from_samples(a, b, c);
    for (const Vec3d& q : {a, b, c}) CHECK(std::abs(p.signed_distance(q)) < 1e-7);
    CHECK(p.normal.dot((b - a).cross(c - a)) > 0.0);
  }
}

TEST_CASE("plane missing the mesh keeps it whole on its side") {
  const TriMesh m = make_icosphere(1);
  const CutResult above = cut(m, Planed::through(Vec3d(0, 0, -5), Vec3d::UnitZ()));
  CHECK(above.no_intersection);
  CHECK(above.positive_mesh.face_count() == m.face_count());
  CHECK(above.positive_mesh.positions == m.positions);
  CHECK(above.negative_mesh.face_count() == 0);
  const CutResult below = cut(m, Planed::through(Vec3d(0, 0, 5), Vec3d::UnitZ()));
  CHECK(below.no_intersection);
  CHECK(below.negative_mesh.face_count() == m.face_count());
  CHECK(below.positive_mesh.face_count() == 0);
}

TEST_CASE("one straddling triangle becomes three faces with two intersection points") {
  TriMesh m;
  m.positions = {Vec3d(-1, 0, 0), Vec3d(1, -1, 0), Vec3d(1, 1, 0)};
  m.faces = {Face(0, 1, 2)};
  finish_mesh(m);
  const Planed plane = Planed::through(Vec3d::Zero(), Vec3d::UnitX());
  const CutResult r = cut(m, plane);
  CHECK(r.intersection_points == 2);
  CHECK(r.positive_mesh.face_count() + r.negative_mesh.face_count() == 3);
  CHECK(r.negative_mesh.face_count() == 1);
  CHECK(r.seam_vertex_pairs.size() == 2);
  check_result(m, plane, r);
}

TEST_CASE("attributes of intersection points are interpolated") {
  TriMesh m;
  m.positions = {Vec3d(-1, 0, 0), Vec3d(1, -1, 0), Vec3d(1, 1, 0)};
  m.faces = {Face(0, 1, 2)};
  finish_mesh(m);
  m.uvs = {Vec2d(0, 0), Vec2d(1, 0), Vec2d(1, 1)};
  m.skin = {{{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}};
  const CutResult r = cut(m, Planed::through(Vec3d::Zero(), Vec3d::UnitX()));
  REQUIRE(r.added_vertices.size() == 2);
  for (const AddedVertex& v : r.added_vertices) {
    CHECK(v.t == doctest::Approx(0.5));
    CHECK(v.uv.x() == doctest::Approx(0.5));
    CHECK(weight_sum(v.skin) == doctest::Approx(1.0));
    CHECK(v.skin.size() == 2);
    CHECK(v.normal.isApprox(Vec3d::UnitZ()));
  }
}

TEST_CASE("unit cube cut by x = 0 matches a per-triangle oracle") {
  const TriMesh cube = make_cube(1.0);
  const Planed plane = Planed::through(Vec3d::Zero(), Vec3d::UnitX());
  // Oracle: classify corners, count straddling faces and distinct crossed edges.
  std::set<std::pair<VertexId, VertexId>> crossed;
  int straddling = 0, faces_expected = 0;
  for (FaceId f = 0; f < cube.face_count(); ++f) {
    int pos = 0, neg = 0;
    for (int k = 0; k < 3; ++k) {
      const double d = plane.signed_distance(cube.positions[cube.faces[f][k]]);
      pos += d > 0;
      neg += d < 0;
    }
    if (pos && neg) {
      ++straddling;
      faces_expected += (pos + neg == 3) ? 3 : 2;
      for (int k = 0; k < 3; ++k) {
        const VertexId a = cube.faces[f][k], b = cube.faces[f][(k + 1) % 3];
        if (plane.signed_distance(cube.positions[a]) * plane.signed_distance(cube.positions[b]) < 0)
          crossed.insert(std::minmax(a, b));
      }
    } else {
      faces_expected += 1;
    }
  }
  const CutResult r = cut(cube, plane);
  CHECK(r.split_faces == straddling);
  CHECK(r.intersection_points == static_cast<int>(crossed.size()));
  CHECK(r.positive_mesh.face_count() + r.negative_mesh.face_count() == faces_expected);
  CHECK(r.positive_mesh.total_area() == doctest::Approx(3.0));
  CHECK(r.negative_mesh.total_area() == doctest::Approx(3.0));
  check_result(cube, plane, r);
}

TEST_CASE("partition_faces conventions") {
  TriMesh m;
  m.positions = {Vec3d(0, 0, 1), Vec3d(1, 0, 1), Vec3d(0, 1, 1), Vec3d(0, 0, 0), Vec3d(1, 0, -1), Vec3d(0, 1, -1),
                 Vec3d(1, 1, 0), Vec3d(2, 0, 0)};
  m.faces = {Face(0, 1, 2), Face(3, 4, 5), Face(3, 6, 7), Face(0, 4, 1)};
  finish_mesh(m);
  const Planed z0 = Planed::through(Vec3d::Zero(), Vec3d::UnitZ());
  m.face_alive[3] = 0;
  const FacePartition p = partition_faces(m, z0);
  CHECK(p.positive == std::vector<FaceId>{0, 2});
  CHECK(p.negative == std::vector<FaceId>{1});
  m.face_alive[3] = 1;
  try {
    partition_faces(m, z0);
    FAIL("expected StraddlingFace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StraddlingFace);
  }
}

TEST_CASE("area conservation over random planes on several meshes") {
  std::mt19937_64 rng(21);
  const std::vector<TriMesh> meshes = {make_cube(1.0), make_icosphere(2), make_icosphere(3), make_ellipsoid(2502)};
  for (const TriMesh& m : meshes) {
    for (int i = 0; i < 20; ++i) {
      const Planed plane = random_plane(rng, 0.4);
      const CutResult r = cut(m, plane);
      CHECK_FALSE(r.no_intersection);
      check_result(m, plane, r);
    }
  }
}

TEST_CASE("planes through vertices and along edges") {
  const TriMesh m = make_icosphere(1);
  for (VertexId v = 0; v < 12; ++v) {
    const Planed plane = Planed::through(m.positions[v], m.positions[v].cross(Vec3d(0.3, 1, 0.2)));
    check_result(m, plane, cut(m, plane));
  }
  const TriMesh cube = make_cube(1.0);
  const Planed diagonal = Planed::through(Vec3d::Zero(), Vec3d(1, -1, 0));
  check_result(cube, diagonal, cut(cube, diagonal));
}

TEST_CASE("re-cutting a sub-mesh preserves the invariants") {
  std::mt19937_64 rng(8);
  const TriMesh m = make_icosphere(3);
  for (int i = 0; i < 10; ++i) {
    const CutResult first = cut(m, random_plane(rng, 0.3));
    const TriMesh& half = first.positive_mesh.face_count() > 0 ? first.positive_mesh : first.negative_mesh;
    const Planed second = random_plane(rng, 0.3);
    check_result(half, second, cut(half, second));
  }
}

TEST_CASE("cut is deterministic") {
  const TriMesh m = make_ellipsoid(493);
  const Planed plane = Planed::through(Vec3d(0.1, 0, 0), Vec3d(1, 2, 3));
  const CutResult a = cut(m, plane), b = cut(m, plane);
  CHECK(a.positive_mesh.positions == b.positive_mesh.positions);
  CHECK(a.positive_mesh.faces == b.positive_mesh.faces);
  CHECK(a.negative_mesh.faces == b.negative_mesh.faces);
}
