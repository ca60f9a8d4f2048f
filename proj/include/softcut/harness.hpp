#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "softcut/cut.hpp"
#include "softcut/obj_io.hpp"
#include "softcut/particles.hpp"
#include "softcut/sections.hpp"
#include "softcut/tear.hpp"

namespace softcut {

enum class StrokeMode { Tear, Cut };

struct Trajectory {
  StrokeMode mode = StrokeMode::Tear;
  double width = 0.0;
  std::vector<ScalpelSample> samples;
};

/// Throws Parse on malformed text, non-increasing t_ms or fewer than two samples.
Trajectory parse_trajectory(const std::string& text);
std::string trajectory_to_json(const Trajectory& trajectory);

enum Phase : int { PerformTear = 0, UpdateParticles, DisconnectParticles, CalculateBoneweights, UpdateMesh };
constexpr int kPhaseCount = 5;
constexpr std::array<const char*, kPhaseCount> kPhaseNames = {
    "perform_tear", "update_particles", "disconnect_particles", "calculate_boneweights", "update_mesh"};

struct SegmentTiming {
  std::array<double, kPhaseCount> ms{};
  double total_ms = 0.0;
  int removed_faces = 0;
  int added_faces = 0;
  int added_vertices = 0;
};

struct PhaseReport {
  std::vector<SegmentTiming> segments;
  double wall_ms = 0.0;
  int vertices = 0;
  int faces = 0;
  int particles = 0;
  std::vector<std::string> warnings;
};

nlohmann::json report_to_json(const PhaseReport& report);

nlohmann::json delta_to_json(const MeshDelta& delta);
MeshDelta delta_from_json(const nlohmann::json& j);

/// Applies every line of a delta log (one JSON object per line) in order.
void replay_delta_log(TriMesh& mesh, const std::string& log);

/// Tear segments of consecutive strokes on one mesh, each followed by the
/// particle repair and a refresh of the deformed vertex positions.
class TearPipeline {
 public:
  /// `particles` and `skeleton` may be null. All referenced objects must
  /// outlive the pipeline.
  TearPipeline(TriMesh& mesh, MeshSections& sections, ParticleSystem* particles, const Skeleton* skeleton,
               RepairMode repair = RepairMode::Pruned, int threads = 1);

  /// Tears one box. `timing` receives the phase times when not null; when
  /// `log` is not null the delta is appended to it as one JSON line.
  MeshDelta segment(const TearBox& box, double next_reach, SegmentTiming* timing = nullptr,
                    std::string* log = nullptr);

  /// Closes the stroke: spawns slit particles along it (when `slit`) and
  /// resets the stroke state. Returns the new particle ids.
  std::vector<int> end_stroke(double width, bool slit);

  /// Rest positions moved by the particles (rest positions without particles).
  const std::vector<Vec3d>& deformed() const { return deformed_; }
  void refresh_deformed();

  bool stroke_active() const { return !state_.boxes_so_far.empty(); }

 private:
  TriMesh& mesh_;
  MeshSections& sections_;
  ParticleSystem* particles_;
  const Skeleton* skeleton_;
  RepairMode repair_;
  int threads_;
  TearState state_;
  std::vector<RimVertex> rim_;
  std::vector<VertexId> touched_;
  std::vector<Vec3d> deformed_;
};

struct TearParams {
  double width = 0.0;  // non-positive: take the trajectory's width
  std::uint64_t seed = 0;
  int section_target = kDefaultFacesPerSection;
  bool parallel = false;
  bool particles = true;
  bool slit_particles = true;
  RepairMode repair = RepairMode::Pruned;
  std::optional<ParticleParams> particle_params;  // defaults from the mesh when empty
};

struct TearRun {
  TriMesh mesh;
  std::optional<ParticleSystem> particles;
  PhaseReport report;
  std::string delta_log;  // one JSON line per segment
};

/// Plays a tear trajectory sample by sample: one tear box per segment, each
/// followed by the particle repair. Phases are timed per segment.
TearRun run_tear(const TriMesh& mesh, const Trajectory& trajectory, const TearParams& params,
                 const Skeleton* skeleton = nullptr);

/// Cut plane of a cut trajectory: first sample's tip is the entry point,
/// the first later sample giving a non-collinear triple defines the plane.
/// Throws Collinear.
Planed plane_from_trajectory(const Trajectory& trajectory);

/// Plane a x + b y + c z + d = 0. Throws Parse on a wrong count or a zero normal.
Planed plane_from_coefficients(const std::vector<double>& abcd);

struct CutRun {
  CutResult result;
  double ms = 0.0;
  std::vector<std::string> warnings;
};

CutRun run_cut(const TriMesh& mesh, const Planed& plane);
nlohmann::json cut_report_to_json(const CutRun& run, const Planed& plane);

/// Published reference timings, keyed by size class.
struct TearReference {
  const char* size_class;
  int vertices;
  int faces;
  std::array<double, kPhaseCount> phase_ms;
  double total_ms;
};
struct CutReference {
  const char* size_class;
  int vertices;
  int faces;
  int intersection_points;
  double ms;
};
extern const std::array<TearReference, 3> kTearReferences;
extern const std::array<CutReference, 3> kCutReferences;

/// Budget multiplier applied to the reference numbers for pass/fail.
constexpr double kBudgetFactor = 2.0;

/// Runs a manifest of tear and cut cases and returns the comparison table.
/// Throws Parse on manifest errors.
nlohmann::json run_bench(const nlohmann::json& manifest, int repeats, const std::string& base_dir = ".");

/// Loads a mesh file (with its `.skin.json` sidecar when present) or builds
/// a generated one: "ellipsoid:<vertices>", "icosphere:<subdivisions>", "cube".
LoadedMesh load_mesh_source(const std::string& source, const std::string& base_dir = ".");

/// `mesh.obj` -> `mesh.skin.json`.
std::string sidecar_path(const std::string& obj_path);

/// Straight stroke across the middle of the mesh along x, blade along z.
Trajectory default_tear_trajectory(const TriMesh& mesh, int segments, double width);

}  // namespace softcut
