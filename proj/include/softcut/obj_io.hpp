#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softcut/mesh.hpp"
#include "softcut/skinning.hpp"

namespace softcut {

struct LoadedMesh {
  TriMesh mesh;
  std::optional<Skeleton> skeleton;
  std::vector<std::string> warnings;
};

/// Parses the OBJ subset (v, vn, vt, f with 1-based or negative indices;
/// polygons fan-triangulated) plus the optional skin sidecar. One mesh vertex
/// per `v` line; the first corner referencing a vertex decides its normal and
/// uv. Missing normals are recomputed from faces.
///
/// Throws Parse (with line number), NonManifold, or InvalidWeights.
LoadedMesh load_mesh(std::string_view obj_text, std::optional<std::string_view> sidecar_text = std::nullopt);

struct SavedMesh {
  std::string obj;
  std::optional<std::string> sidecar;  // present when the mesh is skinned
};

/// Writes live faces and the vertices they use. Numbers are printed in
/// shortest round-trip form, so load(save(m)) reproduces positions exactly.
SavedMesh save_mesh(const TriMesh& mesh, const Skeleton* skeleton = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace softcut
