#include "softcut/clip_oracle.hpp"

namespace softcut {

std::vector<Vec3d> oracle_clip_halfspace(const std::vector<Vec3d>& poly, const Planed& plane) {
  std::vector<Vec3d> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3d& p = poly[i];
    const Vec3d& q = poly[(i + 1) % n];
    const double dp = plane.normal.dot(p) - plane.offset;
    const double dq = plane.normal.dot(q) - plane.offset;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      const double s = dp / (dp - dq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

namespace {

double area_of(const std::vector<Vec3d>& poly) {
  Vec3d acc = Vec3d::Zero();
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) acc += (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]);
  return 0.5 * acc.norm();
}

std::vector<Vec3d> clip_box(std::vector<Vec3d> poly, const TearBox& box) {
  for (const Planed& pl : box.planes) {
    poly = oracle_clip_halfspace(poly, pl);
    if (poly.size() < 3) return {};
  }
  return poly;
}

// Inclusion-exclusion over the boxes meeting this polygon.
double union_area(const std::vector<Vec3d>& poly, std::span<const TearBox> boxes, std::size_t start) {
  double total = 0.0;
  for (std::size_t i = start; i < boxes.size(); ++i) {
    const std::vector<Vec3d> inside = clip_box(poly, boxes[i]);
    if (inside.empty()) continue;
    const double a = area_of(inside);
    if (a <= 0.0) continue;
    total += a - union_area(inside, boxes, i + 1);
  }
  return total;
}

}  // namespace

double oracle_clip_area(std::span<const std::array<Vec3d, 3>> triangles, std::span<const TearBox> boxes) {
  double total = 0.0;
  for (const auto& tri : triangles) total += union_area(std::vector<Vec3d>(tri.begin(), tri.end()), boxes, 0);
  return total;
}

}  // namespace softcut
