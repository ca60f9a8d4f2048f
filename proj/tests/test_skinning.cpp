#include "doctest.h"

#include <random>

#include "softcut/skinning.hpp"

using namespace softcut;

namespace {

Eigen::Matrix4d translation(const Vec3d& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 1>(0, 3) = t;
  return m;
}

Skeleton two_bones() {
  Skeleton s;
  s.bones = {Bone{"a", -1, Eigen::Matrix4d::Identity(), Eigen::Matrix4d::Identity()},
             Bone{"b", 0, translation(Vec3d(0, 1, 0)), translation(Vec3d(0, 1, 0))}};
  return s;
}

}  // namespace

TEST_CASE("identity pose leaves points alone") {
  const Skeleton s = two_bones();
  const Vec3d v(0.3, -2, 5);
  CHECK((lbs_point(v, {{0, 0.3}, {1, 0.7}}, s) - v).norm() < 1e-12);
}

TEST_CASE("single bone translation") {
  Skeleton s = two_bones();
  s.bones[0].pose = translation(Vec3d(1, 2, 3));
  CHECK((lbs_point(Vec3d(1, 1, 1), {{0, 1.0}}, s) - Vec3d(2, 3, 4)).norm() < 1e-12);
}

TEST_CASE("two bones at half weight average their translations") {
  Skeleton s = two_bones();
  s.bones[0].pose = translation(Vec3d(2, 0, 0));
  s.bones[1].pose = translation(Vec3d(0, 1, 0)) * translation(Vec3d(0, 0, 4));
  const Vec3d v(1, 1, 1);
  CHECK((lbs_point(v, {{0, 0.5}, {1, 0.5}}, s) - (v + Vec3d(1, 0, 2))).norm() < 1e-12);
}

TEST_CASE("weights must sum to one") {
  const Skeleton s = two_bones();
  try {
    lbs_point(Vec3d::Zero(), {{0, 0.5}}, s);
    FAIL("expected BadWeights");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadWeights);
  }
  CHECK_THROWS_AS(lbs_point(Vec3d::Zero(), {{7, 1.0}}, s), Error);
}

TEST_CASE("interpolate_skin examples") {
  const SkinWeights half = interpolate_skin({{0, 1.0}}, {{1, 1.0}}, 0.5);
  REQUIRE(half.size() == 2);
  CHECK(half[0] == BoneWeight{0, 0.5});
  CHECK(half[1] == BoneWeight{1, 0.5});

  const SkinWeights a = {{0, 0.25}, {2, 0.75}};
  CHECK(interpolate_skin(a, {{1, 1.0}}, 0.0) == a);

  const SkinWeights shared = interpolate_skin({{0, 0.6}, {1, 0.4}}, {{0, 0.4}, {3, 0.6}}, 0.5);
  CHECK(weight_sum(shared) == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(shared.front().bone == 0);
  CHECK(shared.front().weight == doctest::Approx(0.5));
}

TEST_CASE("interpolated weights stay normalized, bounded and capped") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> bone(0, 9);
  auto random_list = [&] {
    SkinWeights w;
    for (int i = 0; i < 6; ++i) w.push_back({bone(rng), u(rng)});
    return normalize_skin(w);
  };
  for (int i = 0; i < 2000; ++i) {
    const SkinWeights w = interpolate_skin(random_list(), random_list(), u(rng));
    CHECK(std::abs(weight_sum(w) - 1.0) <= 1e-6);
    CHECK(w.size() <= static_cast<std::size_t>(kMaxBonesPerVertex));
    for (const BoneWeight& b : w) {
      CHECK(b.weight >= 0.0);
      CHECK(b.weight <= 1.0);
    }
  }
}

TEST_CASE("skeleton validation") {
  Skeleton s = two_bones();
  s.validate();
  s.bones[0].parent = 1;
  CHECK_THROWS_AS(s.validate(), Error);
  Skeleton singular = two_bones();
  singular.bones[1].bind = Eigen::Matrix4d::Zero();
  CHECK_THROWS_AS(singular.validate(), Error);
}
