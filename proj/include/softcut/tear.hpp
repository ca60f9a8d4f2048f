#pragma once

#include <optional>
#include <span>
#include <vector>

#include "softcut/mesh.hpp"
#include "softcut/sections.hpp"
#include "softcut/tear_box.hpp"

namespace softcut {

/// Intersection vertex created on a boundary plane of a tear box.
struct RimVertex {
  VertexId id = -1;
  int box = -1;    // index into TearState::boxes_so_far
  int plane = -1;  // BoxPlane index
};

/// Stroke-level bookkeeping carried from one tear segment to the next.
struct TearState {
  std::vector<TearBox> boxes_so_far;
  std::vector<FaceId> search_list;       // live faces worth testing next segment, sorted
  std::vector<RimVertex> rim_vertices;   // created by the latest segment
  std::vector<VertexId> touched_vertices;  // corners of faces added by the latest segment, sorted
};

struct TearOptions {
  /// Interpolate skin weights of new vertices inside tear_segment. When false
  /// the new vertices get empty weight lists and fill_skin_weights must run.
  bool interpolate_skin = true;
  /// Drop faces from the search list that the next segment cannot reach.
  bool prune_search_list = true;
  /// Farthest the next segment can reach beyond this box (sample spacing +
  /// width). Non-positive means "this box's length + width".
  double next_reach = 0.0;
};

/// Clips the mesh inside `box`: faces partially inside are split and only
/// their outside parts kept (quads by the shorter diagonal), faces fully
/// inside are removed, and neighbours left with a vertex hanging on an edge
/// are split by the second pass. The mesh and sections advance one epoch; the
/// returned delta replays the change. A box that misses the mesh yields an
/// empty delta (the epoch still advances).
///
/// Throws NonManifoldResult (after restoring the mesh) if the result would
/// have an edge shared by more than two faces, and StaleSections if the
/// sections lag the mesh.
MeshDelta tear_segment(TriMesh& mesh, MeshSections& sections, const TearBox& box, TearState& state,
                       const TearOptions& options = {});

/// Closed band test: every point lies on the inner side (within eps) of the
/// four planes adjacent to `plane` in the box.
bool band_test(std::span<const Vec3d> points, int plane, const TearBox& box, double eps);

/// False only when the face bounds are strictly outside the box grown by `reach`.
bool prune_search_list(const TriMesh& mesh, FaceId face, const TearBox& box, double reach);

/// Given the mesh with `first_pass` applied, splits every candidate face
/// (and every face added by the first pass) that has one of the first pass's
/// new vertices in the interior of an edge, fanning from the opposite corner.
/// Returns first_pass amended with those splits.
MeshDelta second_pass(const TriMesh& mesh, const MeshDelta& first_pass, std::span<const FaceId> candidates);

/// Fills skin weights of vertices added by `delta` from their parent edge,
/// in creation order. No-op for unskinned meshes.
void fill_skin_weights(TriMesh& mesh, MeshDelta& delta);

struct StrokeSampling {
  double distance_threshold = 0.0;
  double angle_threshold_deg = 25.0;
};

/// Default sampling thresholds for a mesh: 2% of its diagonal, 25 degrees.
StrokeSampling default_sampling(const TriMesh& mesh);

/// Online form of sample_stroke.
class StrokeSampler {
 public:
  explicit StrokeSampler(StrokeSampling params) : params_(params) {}

  /// Feeds one raw pose; returns the samples it made final (possibly none).
  std::vector<ScalpelSample> push(const ScalpelSample& raw);
  /// Ends the stroke; the last raw pose is kept if it moved.
  std::vector<ScalpelSample> finish();

 private:
  StrokeSampling params_;
  std::vector<ScalpelSample> raw_;
  std::optional<ScalpelSample> last_kept_;
  bool last_raw_kept_ = false;
  Vec3d last_direction_ = Vec3d::Zero();
  Vec3d prev_direction_ = Vec3d::Zero();
};

/// Keeps poses at least distance_threshold apart, plus any pose where the
/// raw motion turns by more than angle_threshold; first and last poses are
/// always kept (a stationary stroke yields one sample).
std::vector<ScalpelSample> sample_stroke(std::span<const ScalpelSample> raw, StrokeSampling params);

/// Turns accepted samples into tear boxes as soon as each box is final (the
/// interface with the following segment is known), then on finish().
class TearStroke {
 public:
  explicit TearStroke(double width) : width_(width) {}

  std::vector<TearBox> push(const ScalpelSample& sample);
  std::vector<TearBox> finish();

  /// Reach of the segment after box k (spacing + width) for search-list pruning.
  double next_reach(std::size_t box_index) const;

  const std::vector<ScalpelSample>& samples() const { return samples_; }

 private:
  std::vector<TearBox> ready(bool final);

  double width_;
  std::vector<ScalpelSample> samples_;
  std::size_t emitted_ = 0;
};

}  // namespace softcut
