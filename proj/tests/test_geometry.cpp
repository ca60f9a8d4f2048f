#include "doctest.h"

#include <random>

#include "softcut/clip_oracle.hpp"
#include "softcut/geometry.hpp"
#include "softcut/primitives.hpp"
#include "support.hpp"

using namespace softcut;

namespace {
const Planed kZ0{Vec3d::UnitZ(), 0.0};
}

TEST_CASE("plane_side classifies by the sign of the offset distance") {
  CHECK(plane_side(Vec3d(0, 0, 1), kZ0, 1e-9) == Side::Positive);
  CHECK(plane_side(Vec3d(0, 0, 0), kZ0, 1e-9) == Side::On);
  CHECK(plane_side(Vec3d(1, 2, -3), kZ0, 1e-9) == Side::Negative);
  CHECK(plane_side(Vec3d(0, 0, 5e-10), kZ0, 1e-9) == Side::On);
}

TEST_CASE("plane_side is anti-symmetric under flipping the plane") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Planed pl = Planed::through(test::random_unit(rng) * test::uniform(rng, -1, 1), test::random_unit(rng));
    const Vec3d p(test::uniform(rng, -2, 2), test::uniform(rng, -2, 2), test::uniform(rng, -2, 2));
    CHECK(plane_side(p, pl.flipped(), 1e-9) == flip(plane_side(p, pl, 1e-9)));
  }
}

TEST_CASE("segment_plane_intersect") {
  auto mid = segment_plane_intersect(Vec3d(0, 0, -1), Vec3d(0, 0, 1), kZ0);
  REQUIRE(mid);
  CHECK(mid->point.isApprox(Vec3d(0, 0, 0)));
  CHECK(mid->t == doctest::Approx(0.5));

  CHECK_FALSE(segment_plane_intersect(Vec3d(1, 0, 1), Vec3d(2, 0, 1), kZ0));

  auto third = segment_plane_intersect(Vec3d(0, 0, 1), Vec3d(0, 0, 4), Planed{Vec3d::UnitZ(), 2.0});
  REQUIRE(third);
  CHECK((third->point - Vec3d(0, 0, 2)).norm() < 1e-12);
  CHECK(third->t == doctest::Approx(1.0 / 3.0));

  auto endpoint = segment_plane_intersect(Vec3d(0, 0, 0), Vec3d(0, 0, 3), kZ0);
  REQUIRE(endpoint);
  CHECK(endpoint->t == 0.0);

  CHECK_THROWS_AS(segment_plane_intersect(Vec3d(0, 0, 0), Vec3d(1, 0, 0), kZ0), Error);
}

TEST_CASE("returned crossings lie on the plane") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Planed pl = Planed::through(Vec3d::Zero(), test::random_unit(rng));
    const Vec3d a = 3.0 * test::random_unit(rng), b = 3.0 * test::random_unit(rng);
    if (auto x = segment_plane_intersect(a, b, pl)) CHECK(std::abs(pl.signed_distance(x->point)) < 1e-7);
  }
}

TEST_CASE("triangle_plane_clip: triangle wholly on one side") {
  const std::array<Vec3d, 3> tri = {Vec3d(0, 0, 1), Vec3d(1, 0, 1), Vec3d(0.5, std::sqrt(0.75), 1)};
  const auto clip = triangle_plane_clip(tri, kZ0, 1e-9);
  CHECK(clip.split.positive.size() == 3);
  CHECK(clip.split.negative.empty());
  CHECK(clip.split.intersections.empty());
}

TEST_CASE("triangle_plane_clip: straddling triangle gives a triangle and a quad") {
  const std::array<Vec3d, 3> tri = {Vec3d(0, 0, -1), Vec3d(1, 0, 1), Vec3d(-1, 0, 1)};
  const auto clip = triangle_plane_clip(tri, kZ0, 1e-9);
  REQUIRE(clip.split.intersections.size() == 2);
  std::vector<double> xs = {clip.split.intersections[0].point.x(), clip.split.intersections[1].point.x()};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(-0.5));
  CHECK(xs[1] == doctest::Approx(0.5));
  for (const auto& x : clip.split.intersections) CHECK(std::abs(x.point.z()) < 1e-15);
  CHECK(clip.split.negative.size() == 3);
  CHECK(clip.split.positive.size() == 4);
  for (std::size_t i = 0; i < clip.intersection_barycentrics.size(); ++i) {
    const Vec3d& w = clip.intersection_barycentrics[i];
    CHECK(w.sum() == doctest::Approx(1.0));
    const Vec3d p = w[0] * tri[0] + w[1] * tri[1] + w[2] * tri[2];
    CHECK((p - clip.split.intersections[i].point).norm() < 1e-12);
  }
}

TEST_CASE("triangle_plane_clip: an On vertex is shared, not duplicated") {
  const std::array<Vec3d, 3> tri = {Vec3d(0, 0, 0), Vec3d(1, 0, 1), Vec3d(1, 0, -1)};
  const auto clip = triangle_plane_clip(tri, kZ0, 1e-9);
  REQUIRE(clip.split.intersections.size() == 2);
  int corners = 0;
  for (const auto& x : clip.split.intersections) corners += x.is_corner();
  CHECK(corners == 1);
  CHECK(clip.split.positive.size() == 3);
  CHECK(clip.split.negative.size() == 3);
}

TEST_CASE("triangle_plane_clip conserves area on random inputs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const std::array<Vec3d, 3> tri = {test::random_unit(rng), test::random_unit(rng), test::random_unit(rng)};
    const double area = triangle_area(tri[0], tri[1], tri[2]);
    if (area < 1e-6) continue;
    const Planed pl = Planed::through(0.3 * test::random_unit(rng), test::random_unit(rng));
    const auto clip = triangle_plane_clip(tri, pl, 1e-12);
    const auto pos = points_of(clip.split.positive), neg = points_of(clip.split.negative);
    const double a = (pos.size() >= 3 ? polygon_area<double>(pos) : 0.0) + (neg.size() >= 3 ? polygon_area<double>(neg) : 0.0);
    CHECK(test::relative_error(a, area) < 1e-9);
  }
}

TEST_CASE("oracle: nothing inside gives zero, a contained triangle gives its area") {
  ScalpelSample a{0, Vec3d(-5, 0, 0), Vec3d(-5, 0, 5)}, b{1, Vec3d(5, 0, 0), Vec3d(5, 0, 5)};
  const std::vector<ScalpelSample> s = {a, b};
  const auto boxes = build_tear_boxes(s, 10.0);
  const std::vector<std::array<Vec3d, 3>> far = {{Vec3d(20, 0, 0), Vec3d(21, 0, 0), Vec3d(20, 1, 0)}};
  CHECK(oracle_clip_area(far, boxes) == 0.0);
  const std::vector<std::array<Vec3d, 3>> inside = {{Vec3d(0, 0, 1), Vec3d(1, 0, 1), Vec3d(0, 1, 1)}};
  CHECK(oracle_clip_area(inside, boxes) == doctest::Approx(0.5));
}

TEST_CASE("oracle: unit square against a slab") {
  const std::vector<std::array<Vec3d, 3>> square = {{Vec3d(0, -0.5, 0), Vec3d(1, -0.5, 0), Vec3d(1, 0.5, 0)},
                                                     {Vec3d(0, -0.5, 0), Vec3d(1, 0.5, 0), Vec3d(0, 0.5, 0)}};
  ScalpelSample a{0, Vec3d(-1, 0, 0), Vec3d(-1, 0, 1)}, b{1, Vec3d(2, 0, 0), Vec3d(2, 0, 1)};
  const std::vector<ScalpelSample> s = {a, b};
  const auto boxes = build_tear_boxes(s, 0.2);
  CHECK(oracle_clip_area(square, boxes) == doctest::Approx(0.2).epsilon(1e-12));

  // Cross-check on a refined grid of the same square.
  TriMesh grid = make_grid(16, 16, 1.0);
  for (Vec3d& p : grid.positions) p.y() -= 0.5;
  CHECK(oracle_clip_area(live_triangles(grid), boxes) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("oracle counts overlapping boxes once") {
  const std::vector<std::array<Vec3d, 3>> square = {{Vec3d(0, -0.5, 0), Vec3d(1, -0.5, 0), Vec3d(1, 0.5, 0)},
                                                     {Vec3d(0, -0.5, 0), Vec3d(1, 0.5, 0), Vec3d(0, 0.5, 0)}};
  ScalpelSample a{0, Vec3d(-1, 0, 0), Vec3d(-1, 0, 1)}, b{1, Vec3d(2, 0, 0), Vec3d(2, 0, 1)};
  const std::vector<ScalpelSample> s = {a, b};
  const TearBox box = build_tear_boxes(s, 0.2)[0];
  const std::vector<TearBox> twice = {box, box};
  CHECK(oracle_clip_area(square, twice) == doctest::Approx(0.2).epsilon(1e-12));
}
