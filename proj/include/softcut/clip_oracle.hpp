#pragma once

#include <array>
#include <span>
#include <vector>

#include "softcut/geometry.hpp"
#include "softcut/tear_box.hpp"

namespace softcut {

/// Brute-force reference for the tear path: area of triangle material inside
/// the union of the boxes, by clipping every triangle against every box's
/// half-spaces (inclusion-exclusion where boxes overlap, as when a stroke
/// crosses itself). Deliberately shares no code with the tear clipper.
double oracle_clip_area(std::span<const std::array<Vec3d, 3>> triangles, std::span<const TearBox> boxes);

/// Convex polygon clipped to { x : n.x <= offset } (Sutherland-Hodgman).
std::vector<Vec3d> oracle_clip_halfspace(const std::vector<Vec3d>& poly, const Planed& plane);

}  // namespace softcut
