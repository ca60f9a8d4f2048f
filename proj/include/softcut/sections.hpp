#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "softcut/mesh.hpp"
#include "softcut/tear_box.hpp"

namespace softcut {

constexpr int kDefaultFacesPerSection = 256;

/// Axis-aligned bin of faces. A face whose bounds touch several section boxes
/// is listed in each of them.
struct MeshSection {
  Aabbd aabb;
  std::vector<FaceId> face_ids;    // sorted
  std::vector<VertexId> vertex_ids;  // sorted
};

struct MeshSections {
  std::vector<MeshSection> sections;
  std::uint64_t epoch = 0;
  int target_faces = kDefaultFacesPerSection;
};

/// Recursive median split (by face centroid, along the longest axis) until
/// each leaf holds at most `target_faces_per_section` faces; then every face
/// is also listed in the other sections its bounds touch.
MeshSections build_sections(const TriMesh& mesh, int target_faces_per_section = kDefaultFacesPerSection);

/// Brings the sections to the mesh epoch after `delta`: removed faces are
/// dropped from the sections that held them, added faces are binned into the
/// sections their bounds touch (growing the nearest box if none does).
void refresh_sections(MeshSections& sections, const TriMesh& mesh, const MeshDelta& delta);

/// Conservative candidate set: every live face with material inside any box
/// (grown by `margin`) is returned, sorted and unique. Throws StaleSections
/// when the sections were built for another mesh epoch.
std::vector<FaceId> sections_touching(const MeshSections& sections, const TriMesh& mesh, std::span<const TearBox> boxes,
                                      double margin = 0.0);

/// True unless the bounds are certainly disjoint from the box.
bool aabb_may_touch_box(const Aabbd& aabb, const TearBox& box, double margin);

}  // namespace softcut
