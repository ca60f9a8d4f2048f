#pragma once

#include <array>
#include <span>
#include <vector>

#include "softcut/geometry.hpp"

namespace softcut {

/// Timestamped blade pose: the tip touches the mesh, `end` is the other end
/// of the blade.
struct ScalpelSample {
  double t_ms = 0.0;
  Vec3d tip = Vec3d::Zero();
  Vec3d end = Vec3d::UnitZ();
};

/// Fixed plane order of a tear box. Opposite planes are adjacent in index
/// (0/1, 2/3, 4/5).
enum class BoxPlane : int { LateralNeg = 0, LateralPos = 1, Entry = 2, Exit = 3, Top = 4, Bottom = 5 };

constexpr int kBoxPlanes = 6;

constexpr int opposite(int plane) { return plane ^ 1; }

/// Clipping volume of one tear segment. The open region is
/// { x : planes[p].signed_distance(x) < 0 for all p } (outward normals).
struct TearBox {
  std::array<Planed, kBoxPlanes> planes;
  Planed tear_plane;
  std::array<Vec3d, 2> segment_span;  // tip at entry, tip at exit
  double width = 0.0;

  // Frame the box was built from.
  Vec3d motion = Vec3d::UnitX();
  Vec3d axis = Vec3d::UnitZ();
  Vec3d lateral = -Vec3d::UnitY();

  const Planed& plane(BoxPlane p) const { return planes[static_cast<int>(p)]; }

  bool contains_strict(const Vec3d& p, double eps) const;
  bool contains_closed(const Vec3d& p, double eps) const;

  /// True when the closed box (grown by eps) meets segment [a, b].
  bool segment_intersects(const Vec3d& a, const Vec3d& b, double eps) const;

  /// Lower bound on the Euclidean distance from p to the box (0 inside).
  double distance_lower_bound(const Vec3d& p) const;

  /// Vertices of the polytope (feasible triple-plane intersections).
  std::vector<Vec3d> vertices(double eps = 1e-9) const;

  Aabbd bounds() const;

  /// Copy with every plane pushed outward by `amount`.
  TearBox expanded(double amount) const;
};

/// Builds one box per consecutive pair of samples. Consecutive boxes share
/// their interface plane (box k's exit is box k+1's entry, flipped), chosen
/// through the common sample's blade and bisecting the turn. Samples whose
/// segment from the previous kept sample has no usable frame (no motion, or
/// motion along the blade) are dropped. Throws DegenerateSegment when fewer
/// than two usable samples remain.
std::vector<TearBox> build_tear_boxes(std::span<const ScalpelSample> samples, double width);

/// Samples that survive the degenerate-segment merge, in order.
std::vector<ScalpelSample> usable_samples(std::span<const ScalpelSample> samples);

}  // namespace softcut
