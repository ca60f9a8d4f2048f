#pragma once

#include <span>
#include <string>
#include <vector>

#include "softcut/mesh.hpp"

namespace softcut {

constexpr int kMaxBonesPerVertex = 4;
constexpr double kSkinPruneThreshold = 1e-4;

struct Bone {
  std::string name;
  int parent = -1;
  Eigen::Matrix4d bind = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d pose = Eigen::Matrix4d::Identity();
};

/// Bones in topological order (parent index below child index). Bind and pose
/// matrices are model-space transforms.
struct Skeleton {
  std::vector<Bone> bones;

  int size() const { return static_cast<int>(bones.size()); }

  /// Throws Parse when a parent index is not below its child or a bind
  /// matrix is singular.
  void validate() const;

  void reset_pose();

  /// pose * bind^-1 per bone.
  std::vector<Eigen::Matrix4d> skinning_matrices() const;
};

/// Linear-blend skinning of a rest-space point. Throws BadWeights when the
/// weights do not sum to 1 within 1e-6 or reference unknown bones.
Vec3d lbs_point(const Vec3d& rest, const SkinWeights& weights, const Skeleton& skeleton);
Vec3d lbs_point(const Vec3d& rest, const SkinWeights& weights, std::span<const Eigen::Matrix4d> skinning);

/// Blend of two normalized weight lists at parameter t (0 gives `a`).
/// The result is pruned below kSkinPruneThreshold, capped at
/// kMaxBonesPerVertex bones and renormalized.
SkinWeights interpolate_skin(const SkinWeights& a, const SkinWeights& b, double t);

/// Merges duplicate bones, prunes, caps and renormalizes. Result is sorted by
/// bone id.
SkinWeights normalize_skin(SkinWeights w);

double weight_sum(const SkinWeights& w);

}  // namespace softcut
