#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softcut/cut.hpp"
#include "softcut/skinning.hpp"
#include "softcut/tear.hpp"

namespace softcut {

struct ParticleParams {
  double d = 0.0;          // influence radius
  double delta = 0.0;      // neighbor distance threshold
  double poisson_r = 0.0;  // minimum anchor spacing
  std::uint64_t seed = 0;
  double k = 400.0;        // spring constant, 1/s^2
  double c = 12.0;         // damping, 1/s
  double mass = 1.0;
  double steepness = 8.0;  // sigmoid steepness s
};

/// poisson_r = 6% of the mesh diagonal, d = 1.5 poisson_r, delta = 2.5 poisson_r.
ParticleParams default_particle_params(const TriMesh& mesh, std::uint64_t seed = 0);

struct Particle {
  int id = 0;
  VertexId anchor_vertex = -1;  // -1 once the anchor vertex is gone from the mesh
  Vec3d anchor_rest = Vec3d::Zero();  // anchor in mesh (rest) space
  Vec3d anchor_pos = Vec3d::Zero();   // anchor in the current pose
  Vec3d rest_offset = Vec3d::Zero();  // spring equilibrium is anchor_pos + rest_offset
  Vec3d center = Vec3d::Zero();
  Vec3d velocity = Vec3d::Zero();
  bool slit = false;

  Vec3d displacement() const { return center - anchor_pos; }
};

struct Influence {
  int particle = 0;
  double raw = 0.0;     // sigmoid weight before normalization
  double weight = 0.0;  // normalized over the vertex
};

struct NeighborLink {
  int a = 0;  // a < b
  int b = 0;
  double weight = 0.0;

  friend bool operator==(const NeighborLink&, const NeighborLink&) = default;
};

/// Vertex-particle and particle-particle links. Vertices with no influence
/// are pinned: they follow the rest pose rigidly.
struct ParticleMap {
  std::vector<std::vector<Influence>> influence;  // per vertex, sorted by particle
  std::vector<NeighborLink> neighbors;            // sorted by (a, b)
  std::vector<std::pair<int, int>> severed;       // pairs cut apart by a repair, never relinked
  std::vector<double> reach;                      // per particle, upper bound on link length
};

struct ParticleSystem {
  ParticleParams params;
  std::vector<Particle> particles;
  ParticleMap map;

  int size() const { return static_cast<int>(particles.size()); }
};

/// Raw influence 1 / (1 + exp(s (r/d - 1/2))).
double influence_weight(double r, double d, double steepness = 8.0);

/// Neighbor weight max(0, 1 - dist / delta).
double neighbor_weight(double dist, double delta);

/// Greedy Poisson-disk selection over a seeded permutation of the live
/// vertices. Throws NoVertices, InvalidParams.
std::vector<VertexId> poisson_sample(const TriMesh& mesh, double poisson_r, std::uint64_t seed);

/// Particles on Poisson-sampled anchors, each vertex linked to every anchor
/// within d (weights normalized per vertex), anchors within delta linked as
/// neighbors. Throws NoVertices, InvalidParams.
ParticleSystem generate_particles(const TriMesh& mesh, const ParticleParams& params);

/// Semi-implicit spring step for every particle, then every vertex is moved
/// to rest + sum_j w_ij (center_j - anchor_j). `forces` is per particle (may be
/// empty). `rest` and `positions` are per vertex.
void step(ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions,
          std::span<const Vec3d> forces, double dt);

/// Vertex positions for the current particle state, without integrating.
void deform(const ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions);

/// deform() split over `threads` workers by vertex range.
void deform_parallel(const ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions,
                     int threads);

/// Spreads per-particle translations of directly moved particles to their
/// neighbors: a moved particle keeps its own, any other gets the W-weighted
/// sum over its moved neighbors (zero with none).
std::vector<Vec3d> propagate(const ParticleSystem& system, std::span<const std::pair<int, Vec3d>> moved);

/// Poses anchors by linear-blend skinning and rebuilds the neighbor links
/// against delta on the posed anchors. Throws NoSkin.
void update_skinned_anchors(ParticleSystem& system, const TriMesh& mesh, const Skeleton& skeleton);

enum class RepairMode { Exhaustive, Pruned };

/// True when segment [a, b] crosses the box's tear plane strictly and the
/// crossing lies in the box band.
bool crosses_tear_plane(const Vec3d& a, const Vec3d& b, const TearBox& box, double eps);

/// Links each rim vertex to every particle within d on rest positions;
/// returns the vertices whose links changed.
std::vector<VertexId> assign_rim_vertices(ParticleSystem& system, const TriMesh& mesh,
                                          std::span<const RimVertex> rim);

/// Removes neighbor links whose anchor segment meets `box` and influence
/// links crossing its tear plane. Links of `fresh` vertices are also tested
/// against every box in `stroke`. Pruned mode skips particles that provably
/// have no link reaching the box. Returns the vertices that lost links.
std::vector<VertexId> disconnect_particles(ParticleSystem& system, const TriMesh& mesh, const TearBox& box,
                                           std::span<const TearBox> stroke, std::span<const RimVertex> rim,
                                           std::span<const VertexId> fresh, RepairMode mode);

/// Renormalizes the given vertices; any left without links is relinked to the
/// nearest particle within 2d whose link crosses no box of `stroke`, or pinned.
void renormalize(ParticleSystem& system, const TriMesh& mesh, std::span<const VertexId> vertices,
                 std::span<const TearBox> stroke);

/// Full repair after one tear segment: the box is stroke.back().
void repair_after_tear(ParticleSystem& system, const TriMesh& mesh, std::span<const TearBox> stroke,
                       std::span<const RimVertex> rim, RepairMode mode = RepairMode::Pruned);

/// Splits the system along the cut: links crossing the plane are dropped,
/// particles go to the side of their anchor, new seam vertices are assigned
/// like rim vertices. Vertex and particle ids are remapped to each sub-mesh.
std::pair<ParticleSystem, ParticleSystem> repair_after_cut(const ParticleSystem& system, const TriMesh& mesh,
                                                           const CutResult& cut, const Planed& plane);

/// Auxiliary particles along a tear slit: rim vertices are clustered greedily
/// within d_slit, one particle per cluster whose spring rest is pushed by
/// eps_open along the tear-plane normal, away from the slit. Each is linked
/// to the `touched` vertices within d_slit on its side. Returns the new ids.
std::vector<int> spawn_slit_particles(ParticleSystem& system, const TriMesh& mesh, std::span<const RimVertex> rim,
                                      std::span<const TearBox> stroke, std::span<const VertexId> touched,
                                      double d_slit, double eps_open);

/// Extends the per-vertex tables to the mesh's vertex count.
void grow_to_mesh(ParticleSystem& system, const TriMesh& mesh);

/// Soundness problems (empty when the map is consistent).
std::vector<std::string> check_map(const ParticleSystem& system, const TriMesh& mesh);

std::string particles_to_json(const ParticleSystem& system);
ParticleSystem particles_from_json(const std::string& text);

}  // namespace softcut
