#pragma once

// Euclidean predicates and constructions shared by the tear and cut paths.
// Everything here is templated on the scalar type and header-only; the
// mesh-level code instantiates it with double.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "softcut/error.hpp"

namespace softcut {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec3d = Vec3<double>;
using Vec2d = Vec2<double>;

/// Oriented plane in Hessian form: normal . x = offset, normal of unit length.
template <typename Scalar>
struct Plane {
  Vec3<Scalar> normal = Vec3<Scalar>::UnitZ();
  Scalar offset = Scalar(0);

  static Plane through(const Vec3<Scalar>& point, const Vec3<Scalar>& direction) {
    Plane p;
    p.normal = direction.normalized();
    p.offset = p.normal.dot(point);
    return p;
  }

  Scalar signed_distance(const Vec3<Scalar>& x) const { return normal.dot(x) - offset; }

  Plane flipped() const { return Plane{-normal, -offset}; }

  /// Same plane shifted by `amount` along its normal.
  Plane shifted(Scalar amount) const { return Plane{normal, offset + amount}; }

  bool valid(Scalar tol = Scalar(1e-9)) const { return std::abs(normal.norm() - Scalar(1)) <= tol; }
};

using Planed = Plane<double>;

enum class Side { Positive, Negative, On };

constexpr Side flip(Side s) {
  return s == Side::Positive ? Side::Negative : (s == Side::Negative ? Side::Positive : Side::On);
}

template <typename Scalar>
Side plane_side(const Vec3<Scalar>& p, const Plane<Scalar>& plane, Scalar eps_side) {
  const Scalar d = plane.signed_distance(p);
  if (std::abs(d) <= eps_side) return Side::On;
  return d > 0 ? Side::Positive : Side::Negative;
}

template <typename Scalar>
struct Crossing {
  Vec3<Scalar> point;
  Scalar t;  // parameter along a -> b
};

/// Crossing of segment [a, b] with the plane. Endpoints within eps_side of
/// the plane are returned as-is (t = 0 or 1). Throws Degenerate when the
/// whole segment lies in the plane.
template <typename Scalar>
std::optional<Crossing<Scalar>> segment_plane_intersect(const Vec3<Scalar>& a, const Vec3<Scalar>& b,
                                                        const Plane<Scalar>& plane,
                                                        Scalar eps_side = Scalar(1e-9)) {
  const Scalar da = plane.signed_distance(a);
  const Scalar db = plane.signed_distance(b);
  const bool a_on = std::abs(da) <= eps_side;
  const bool b_on = std::abs(db) <= eps_side;
  if (a_on && b_on) throw Error(ErrorKind::Degenerate, "segment lies in plane");
  if (a_on) return Crossing<Scalar>{a, Scalar(0)};
  if (b_on) return Crossing<Scalar>{b, Scalar(1)};
  if ((da > 0) == (db > 0)) return std::nullopt;
  const Scalar t = da / (da - db);
  return Crossing<Scalar>{a + t * (b - a), t};
}

template <typename Scalar>
Scalar triangle_area(const Vec3<Scalar>& a, const Vec3<Scalar>& b, const Vec3<Scalar>& c) {
  return Scalar(0.5) * (b - a).cross(c - a).norm();
}

/// Area of a planar polygon given as an ordered loop.
template <typename Scalar>
Scalar polygon_area(std::span<const Vec3<Scalar>> loop) {
  if (loop.size() < 3) return Scalar(0);
  Vec3<Scalar> acc = Vec3<Scalar>::Zero();
  for (std::size_t i = 1; i + 1 < loop.size(); ++i) acc += (loop[i] - loop[0]).cross(loop[i + 1] - loop[0]);
  return Scalar(0.5) * acc.norm();
}

template <typename Scalar>
struct Aabb {
  Vec3<Scalar> min = Vec3<Scalar>::Constant(std::numeric_limits<Scalar>::infinity());
  Vec3<Scalar> max = Vec3<Scalar>::Constant(-std::numeric_limits<Scalar>::infinity());

  bool empty() const { return (min.array() > max.array()).any(); }
  void extend(const Vec3<Scalar>& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& o) {
    min = min.cwiseMin(o.min);
    max = max.cwiseMax(o.max);
  }
  Vec3<Scalar> center() const { return Scalar(0.5) * (min + max); }
  Vec3<Scalar> extent() const { return max - min; }
  Scalar diagonal() const { return empty() ? Scalar(0) : extent().norm(); }
  Aabb inflated(Scalar r) const { return Aabb{(min.array() - r).matrix(), (max.array() + r).matrix()}; }
  bool overlaps(const Aabb& o) const {
    return (min.array() <= o.max.array()).all() && (o.min.array() <= max.array()).all();
  }

  /// Largest signed distance of any box corner from the plane.
  Scalar max_signed_distance(const Plane<Scalar>& plane) const {
    Vec3<Scalar> far;
    for (int k = 0; k < 3; ++k) far[k] = plane.normal[k] >= 0 ? max[k] : min[k];
    return plane.signed_distance(far);
  }
  Scalar min_signed_distance(const Plane<Scalar>& plane) const {
    Vec3<Scalar> near;
    for (int k = 0; k < 3; ++k) near[k] = plane.normal[k] >= 0 ? min[k] : max[k];
    return plane.signed_distance(near);
  }
};

using Aabbd = Aabb<double>;

/// A vertex of a split polygon: either an input corner or a point on the
/// input edge (a, b). For edge points, `a` is the endpoint on the positive
/// side and point = p[a] + t (p[b] - p[a]); the ordering does not depend on
/// the loop orientation, so two faces sharing the edge compute the same point.
template <typename Scalar>
struct SplitPoint {
  int corner = -1;
  int a = -1;
  int b = -1;
  Scalar t = Scalar(0);
  Vec3<Scalar> point;

  bool is_corner() const { return corner >= 0; }
};

template <typename Scalar>
struct PolygonSplit {
  std::vector<SplitPoint<Scalar>> positive;
  std::vector<SplitPoint<Scalar>> negative;
  /// Points on the plane where the loop crosses it: snapped corners and edge
  /// crossings, in loop order. Empty unless the loop straddles the plane.
  std::vector<SplitPoint<Scalar>> intersections;
  bool straddles = false;
};

/// Splits a convex planar loop by a plane. Corners within eps_side of the
/// plane are treated as lying on it and shared by both sides; no new point is
/// created next to them. A loop with no strictly negative corner is returned
/// whole on the positive side (likewise for negative; a loop lying entirely
/// in the plane goes to the positive side).
template <typename Scalar>
PolygonSplit<Scalar> split_polygon(std::span<const Vec3<Scalar>> loop, const Plane<Scalar>& plane,
                                   Scalar eps_side) {
  const int n = static_cast<int>(loop.size());
  PolygonSplit<Scalar> out;
  std::vector<Scalar> dist(n);
  std::vector<Side> side(n);
  bool any_pos = false, any_neg = false;
  for (int i = 0; i < n; ++i) {
    dist[i] = plane.signed_distance(loop[i]);
    side[i] = std::abs(dist[i]) <= eps_side ? Side::On : (dist[i] > 0 ? Side::Positive : Side::Negative);
    any_pos |= side[i] == Side::Positive;
    any_neg |= side[i] == Side::Negative;
  }
  auto corner = [&](int i) {
    SplitPoint<Scalar> p;
    p.corner = i;
    p.point = loop[i];
    return p;
  };
  if (!any_neg) {
    for (int i = 0; i < n; ++i) out.positive.push_back(corner(i));
    return out;
  }
  if (!any_pos) {
    for (int i = 0; i < n; ++i) out.negative.push_back(corner(i));
    return out;
  }
  out.straddles = true;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (side[i] != Side::Negative) out.positive.push_back(corner(i));
    if (side[i] != Side::Positive) out.negative.push_back(corner(i));
    if (side[i] == Side::On) out.intersections.push_back(corner(i));
    const bool crosses = (side[i] == Side::Positive && side[j] == Side::Negative) ||
                         (side[i] == Side::Negative && side[j] == Side::Positive);
    if (!crosses) continue;
    const int pos = side[i] == Side::Positive ? i : j;
    const int neg = pos == i ? j : i;
    SplitPoint<Scalar> x;
    x.a = pos;
    x.b = neg;
    x.t = dist[pos] / (dist[pos] - dist[neg]);
    x.point = loop[pos] + x.t * (loop[neg] - loop[pos]);
    out.positive.push_back(x);
    out.negative.push_back(x);
    out.intersections.push_back(x);
  }
  return out;
}

/// Barycentric weights of a split point with respect to the input loop
/// (size of the loop), usable for attribute interpolation.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> split_point_weights(const SplitPoint<Scalar>& p, int loop_size) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(loop_size);
  if (p.is_corner()) {
    w[p.corner] = Scalar(1);
  } else {
    w[p.a] = Scalar(1) - p.t;
    w[p.b] += p.t;
  }
  return w;
}

/// Single-triangle form of split_polygon with barycentric coordinates for
/// every produced point.
template <typename Scalar>
struct TriangleClip {
  PolygonSplit<Scalar> split;
  std::vector<Vec3<Scalar>> intersection_barycentrics;
};

template <typename Scalar>
TriangleClip<Scalar> triangle_plane_clip(const std::array<Vec3<Scalar>, 3>& tri, const Plane<Scalar>& plane,
                                         Scalar eps_side) {
  TriangleClip<Scalar> out;
  out.split = split_polygon<Scalar>(std::span<const Vec3<Scalar>>(tri.data(), 3), plane, eps_side);
  for (const auto& x : out.split.intersections) out.intersection_barycentrics.push_back(split_point_weights(x, 3));
  return out;
}

template <typename Scalar>
std::vector<Vec3<Scalar>> points_of(const std::vector<SplitPoint<Scalar>>& loop) {
  std::vector<Vec3<Scalar>> pts;
  pts.reserve(loop.size());
  for (const auto& p : loop) pts.push_back(p.point);
  return pts;
}

}  // namespace softcut
