#include "softcut/skinning.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace softcut {

void Skeleton::validate() const {
  for (int b = 0; b < size(); ++b) {
    if (bones[b].parent >= b) throw Error(ErrorKind::Parse, "bone " + std::to_string(b) + " has parent not below it");
    if (std::abs(bones[b].bind.determinant()) < 1e-12)
      throw Error(ErrorKind::Parse, "bone " + std::to_string(b) + " has a singular bind matrix");
  }
}

void Skeleton::reset_pose() {
  for (Bone& b : bones) b.pose = b.bind;
}

std::vector<Eigen::Matrix4d> Skeleton::skinning_matrices() const {
  std::vector<Eigen::Matrix4d> out;
  out.reserve(bones.size());
  for (const Bone& b : bones) out.push_back(b.pose * b.bind.inverse());
  return out;
}

double weight_sum(const SkinWeights& w) {
  double s = 0.0;
  for (const BoneWeight& bw : w) s += bw.weight;
  return s;
}

Vec3d lbs_point(const Vec3d& rest, const SkinWeights& weights, std::span<const Eigen::Matrix4d> skinning) {
  if (std::abs(weight_sum(weights) - 1.0) > 1e-6) throw Error(ErrorKind::BadWeights, "skin weights do not sum to 1");
  const Eigen::Vector4d v = rest.homogeneous();
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (const BoneWeight& bw : weights) {
    if (bw.bone < 0 || bw.bone >= static_cast<int>(skinning.size()))
      throw Error(ErrorKind::BadWeights, "skin weight references unknown bone " + std::to_string(bw.bone));
    acc += bw.weight * (skinning[bw.bone] * v);
  }
  return acc.head<3>() / acc[3];
}

Vec3d lbs_point(const Vec3d& rest, const SkinWeights& weights, const Skeleton& skeleton) {
  const auto m = skeleton.skinning_matrices();
  return lbs_point(rest, weights, m);
}

SkinWeights normalize_skin(SkinWeights w) {
  std::map<int, double> merged;
  for (const BoneWeight& bw : w) merged[bw.bone] += bw.weight;
  SkinWeights out;
  for (const auto& [bone, weight] : merged) out.push_back({bone, weight});

  auto renormalize = [](SkinWeights& v) {
    const double s = weight_sum(v);
    if (s > 0.0)
      for (BoneWeight& bw : v) bw.weight /= s;
  };
  renormalize(out);
  std::erase_if(out, [](const BoneWeight& bw) { return bw.weight < kSkinPruneThreshold; });
  if (static_cast<int>(out.size()) > kMaxBonesPerVertex) {
    std::stable_sort(out.begin(), out.end(), [](const BoneWeight& a, const BoneWeight& b) { return a.weight > b.weight; });
    out.resize(kMaxBonesPerVertex);
    std::sort(out.begin(), out.end(), [](const BoneWeight& a, const BoneWeight& b) { return a.bone < b.bone; });
  }
  renormalize(out);
  return out;
}

SkinWeights interpolate_skin(const SkinWeights& a, const SkinWeights& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  SkinWeights blend;
  blend.reserve(a.size() + b.size());
  for (const BoneWeight& bw : a) blend.push_back({bw.bone, (1.0 - t) * bw.weight});
  for (const BoneWeight& bw : b) blend.push_back({bw.bone, t * bw.weight});
  return normalize_skin(std::move(blend));
}

}  // namespace softcut
