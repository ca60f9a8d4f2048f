#include "softcut/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace softcut {

using nlohmann::json;

namespace {

// Uniform hash grid over points; queries return candidates in ascending id.
class PointGrid {
 public:
  explicit PointGrid(double cell) : cell_(cell) {}

  void insert(int id, const Vec3d& p) { cells_[key(cell_of(p))].push_back(id); }

  std::vector<int> near(const Vec3d& p, double radius) const {
    std::vector<int> out;
    const Eigen::Vector3i lo = cell_of(p - Vec3d::Constant(radius));
    const Eigen::Vector3i hi = cell_of(p + Vec3d::Constant(radius));
    for (int x = lo.x(); x <= hi.x(); ++x)
      for (int y = lo.y(); y <= hi.y(); ++y)
        for (int z = lo.z(); z <= hi.z(); ++z)
          if (auto it = cells_.find(key(Eigen::Vector3i(x, y, z))); it != cells_.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  Eigen::Vector3i cell_of(const Vec3d& p) const {
    return (p / cell_).array().floor().cast<int>().matrix();
  }
  static std::uint64_t key(const Eigen::Vector3i& c) {
    const auto part = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v) & 0x1fffffu); };
    return part(c.x()) | (part(c.y()) << 21) | (part(c.z()) << 42);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

void check_params(const ParticleParams& p) {
  if (!(p.d > 0 && p.delta > 0 && p.poisson_r > 0))
    throw Error(ErrorKind::InvalidParams, "particle radius, delta and poisson_r must be positive");
  if (p.poisson_r > p.delta) throw Error(ErrorKind::InvalidParams, "poisson_r must not exceed delta");
  if (!(p.k > 0) || p.c < 0 || !(p.mass > 0)) throw Error(ErrorKind::InvalidParams, "bad spring constants");
}

void normalize_vertex(std::vector<Influence>& links) {
  double sum = 0.0;
  for (const Influence& l : links) sum += l.raw;
  for (Influence& l : links) l.weight = l.raw / sum;
}

void add_link(ParticleSystem& s, VertexId v, int particle, double r, double radius) {
  auto& links = s.map.influence[v];
  const auto it = std::lower_bound(links.begin(), links.end(), particle,
                                   [](const Influence& l, int j) { return l.particle < j; });
  if (it != links.end() && it->particle == particle) return;
  links.insert(it, Influence{particle, influence_weight(r, radius, s.params.steepness), 0.0});
  s.map.reach[particle] = std::max(s.map.reach[particle], r);
}

bool crosses_any(const Vec3d& a, const Vec3d& b, std::span<const TearBox> stroke, double eps) {
  for (const TearBox& box : stroke)
    if (crosses_tear_plane(a, b, box, eps)) return true;
  return false;
}

std::vector<NeighborLink> neighbor_links(const std::vector<Particle>& particles, double delta,
                                         const std::vector<std::pair<int, int>>& severed, bool posed) {
  auto anchor = [&](int j) -> const Vec3d& { return posed ? particles[j].anchor_pos : particles[j].anchor_rest; };
  PointGrid grid(delta);
  for (int j = 0; j < static_cast<int>(particles.size()); ++j) grid.insert(j, anchor(j));
  std::vector<NeighborLink> out;
  for (int j = 0; j < static_cast<int>(particles.size()); ++j) {
    for (int k : grid.near(anchor(j), delta)) {
      if (k <= j) continue;
      const double dist = (anchor(j) - anchor(k)).norm();
      if (dist > delta) continue;
      if (std::binary_search(severed.begin(), severed.end(), std::pair(j, k))) continue;
      out.push_back({j, k, neighbor_weight(dist, delta)});
    }
  }
  return out;
}

void sever(ParticleMap& map, int a, int b) {
  const std::pair<int, int> key = std::minmax(a, b);
  const auto it = std::lower_bound(map.severed.begin(), map.severed.end(), key);
  if (it == map.severed.end() || *it != key) map.severed.insert(it, key);
}

std::vector<VertexId> merge_sorted(std::vector<VertexId> a, std::span<const VertexId> b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Vertices carrying the map: those of live faces, or every vertex of a
// point set without faces.
std::vector<VertexId> sampled_vertices(const TriMesh& mesh) {
  if (mesh.face_count() > 0) return live_vertices(mesh);
  std::vector<VertexId> all(mesh.vertex_count());
  for (VertexId v = 0; v < mesh.vertex_count(); ++v) all[v] = v;
  return all;
}

void deform_range(const ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions,
                  std::size_t lo, std::size_t hi) {
  const auto& influence = system.map.influence;
  for (std::size_t i = lo; i < hi; ++i) {
    Vec3d offset = Vec3d::Zero();
    if (i < influence.size())
      for (const Influence& l : influence[i]) offset += l.weight * system.particles[l.particle].displacement();
    positions[i] = rest[i] + offset;
  }
}

}  // namespace

ParticleParams default_particle_params(const TriMesh& mesh, std::uint64_t seed) {
  ParticleParams p;
  p.poisson_r = 0.06 * mesh.bounds().diagonal();
  p.d = 1.5 * p.poisson_r;
  p.delta = 2.5 * p.poisson_r;
  p.seed = seed;
  return p;
}

double influence_weight(double r, double d, double steepness) {
  return 1.0 / (1.0 + std::exp(steepness * (r / d - 0.5)));
}

double neighbor_weight(double dist, double delta) { return std::max(0.0, 1.0 - dist / delta); }

std::vector<VertexId> poisson_sample(const TriMesh& mesh, double poisson_r, std::uint64_t seed) {
  if (!(poisson_r > 0)) throw Error(ErrorKind::InvalidParams, "poisson_r must be positive");
  std::vector<VertexId> order = sampled_vertices(mesh);
  if (order.empty()) throw Error(ErrorKind::NoVertices, "mesh has no vertices to sample");
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);

  PointGrid grid(poisson_r);
  std::vector<VertexId> chosen;
  for (VertexId v : order) {
    const Vec3d& p = mesh.positions[v];
    bool clear = true;
    for (int j : grid.near(p, poisson_r))
      if ((mesh.positions[chosen[j]] - p).norm() < poisson_r) {
        clear = false;
        break;
      }
    if (!clear) continue;
    grid.insert(static_cast<int>(chosen.size()), p);
    chosen.push_back(v);
  }
  return chosen;
}

ParticleSystem generate_particles(const TriMesh& mesh, const ParticleParams& params) {
  check_params(params);
  ParticleSystem s;
  s.params = params;
  const std::vector<VertexId> anchors = poisson_sample(mesh, params.poisson_r, params.seed);
  PointGrid grid(params.d);
  for (int j = 0; j < static_cast<int>(anchors.size()); ++j) {
    Particle p;
    p.id = j;
    p.anchor_vertex = anchors[j];
    p.anchor_rest = p.anchor_pos = p.center = mesh.positions[anchors[j]];
    s.particles.push_back(p);
    grid.insert(j, p.anchor_rest);
  }
  s.map.influence.assign(mesh.vertex_count(), {});
  s.map.reach.assign(s.particles.size(), 0.0);
  for (VertexId v : sampled_vertices(mesh)) {
    const Vec3d& x = mesh.positions[v];
    for (int j : grid.near(x, params.d)) {
      const double r = (s.particles[j].anchor_rest - x).norm();
      if (r <= params.d) add_link(s, v, j, r, params.d);
    }
    if (!s.map.influence[v].empty()) normalize_vertex(s.map.influence[v]);
  }
  s.map.neighbors = neighbor_links(s.particles, params.delta, s.map.severed, false);
  return s;
}

void deform(const ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions) {
  deform_range(system, rest, positions, 0, positions.size());
}

void deform_parallel(const ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions,
                     int threads) {
  const std::size_t n = positions.size();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n / 256));
  if (workers == 1) return deform(system, rest, positions);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] { deform_range(system, rest, positions, lo, hi); });
  }
}

void step(ParticleSystem& system, std::span<const Vec3d> rest, std::span<Vec3d> positions,
          std::span<const Vec3d> forces, double dt) {
  const ParticleParams& p = system.params;
  for (int j = 0; j < system.size(); ++j) {
    Particle& q = system.particles[j];
    Vec3d accel = -p.k * (q.center - (q.anchor_pos + q.rest_offset)) - p.c * q.velocity;
    if (static_cast<std::size_t>(j) < forces.size()) accel += forces[j] / p.mass;
    q.velocity += dt * accel;
    q.center += dt * q.velocity;
  }
  deform(system, rest, positions);
}

std::vector<Vec3d> propagate(const ParticleSystem& system, std::span<const std::pair<int, Vec3d>> moved) {
  std::vector<Vec3d> out(system.size(), Vec3d::Zero());
  std::vector<char> is_moved(system.size(), 0);
  for (const auto& [k, t] : moved) {
    out[k] = t;
    is_moved[k] = 1;
  }
  for (const NeighborLink& l : system.map.neighbors) {
    if (is_moved[l.a] && !is_moved[l.b]) out[l.b] += l.weight * out[l.a];
    if (is_moved[l.b] && !is_moved[l.a]) out[l.a] += l.weight * out[l.b];
  }
  return out;
}

void update_skinned_anchors(ParticleSystem& system, const TriMesh& mesh, const Skeleton& skeleton) {
  if (!mesh.has_skin()) throw Error(ErrorKind::NoSkin, "mesh has no skin weights");
  const std::vector<Eigen::Matrix4d> mats = skeleton.skinning_matrices();
  for (Particle& q : system.particles)
    if (q.anchor_vertex >= 0) q.anchor_pos = lbs_point(q.anchor_rest, mesh.skin[q.anchor_vertex], mats);
  system.map.neighbors = neighbor_links(system.particles, system.params.delta, system.map.severed, true);
}

bool crosses_tear_plane(const Vec3d& a, const Vec3d& b, const TearBox& box, double eps) {
  const double da = box.tear_plane.signed_distance(a);
  const double db = box.tear_plane.signed_distance(b);
  if (!((da > eps && db < -eps) || (da < -eps && db > eps))) return false;
  const Vec3d x = a + (da / (da - db)) * (b - a);
  return band_test(std::span<const Vec3d>(&x, 1), static_cast<int>(BoxPlane::LateralNeg), box, eps);
}

void grow_to_mesh(ParticleSystem& system, const TriMesh& mesh) {
  if (system.map.influence.size() < static_cast<std::size_t>(mesh.vertex_count()))
    system.map.influence.resize(mesh.vertex_count());
  if (system.map.reach.size() != system.particles.size()) {
    system.map.reach.assign(system.particles.size(), 0.0);
    for (VertexId v = 0; v < static_cast<VertexId>(system.map.influence.size()); ++v)
      for (const Influence& l : system.map.influence[v])
        system.map.reach[l.particle] =
            std::max(system.map.reach[l.particle], (system.particles[l.particle].anchor_rest - mesh.positions[v]).norm());
  }
}

std::vector<VertexId> assign_rim_vertices(ParticleSystem& system, const TriMesh& mesh,
                                          std::span<const RimVertex> rim) {
  grow_to_mesh(system, mesh);
  std::vector<VertexId> ids;
  for (const RimVertex& r : rim) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const double d = system.params.d;
  for (VertexId v : ids)
    for (int j = 0; j < system.size(); ++j) {
      const double r = (system.particles[j].anchor_rest - mesh.positions[v]).norm();
      if (r <= d) add_link(system, v, j, r, d);
    }
  return ids;
}

std::vector<VertexId> disconnect_particles(ParticleSystem& system, const TriMesh& mesh, const TearBox& box,
                                           std::span<const TearBox> stroke, std::span<const RimVertex> rim,
                                           std::span<const VertexId> fresh, RepairMode mode) {
  grow_to_mesh(system, mesh);
  const double eps = mesh.eps_side();
  ParticleMap& map = system.map;
  const auto anchor = [&](int j) -> const Vec3d& { return system.particles[j].anchor_rest; };

  std::erase_if(map.neighbors, [&](const NeighborLink& l) {
    if (!box.segment_intersects(anchor(l.a), anchor(l.b), eps)) return false;
    sever(map, l.a, l.b);
    return true;
  });

  // A particle is skipped when its closest rim vertex is not among its
  // vertices and no link of it can reach the box.
  std::vector<char> skip(system.size(), 0);
  if (mode == RepairMode::Pruned) {
    for (int j = 0; j < system.size(); ++j) {
      VertexId closest = -1;
      double best = std::numeric_limits<double>::infinity();
      for (const RimVertex& r : rim) {
        const double dist = (mesh.positions[r.id] - anchor(j)).squaredNorm();
        if (dist < best) {
          best = dist;
          closest = r.id;
        }
      }
      if (closest >= 0) {
        const auto& links = map.influence[closest];
        if (std::any_of(links.begin(), links.end(), [&](const Influence& l) { return l.particle == j; })) continue;
      }
      skip[j] = box.distance_lower_bound(anchor(j)) > map.reach[j] + 2.0 * eps;
    }
  }

  std::vector<VertexId> lost;
  for (VertexId v = 0; v < static_cast<VertexId>(map.influence.size()); ++v) {
    auto& links = map.influence[v];
    if (links.empty()) continue;
    const bool is_fresh = std::binary_search(fresh.begin(), fresh.end(), v);
    const Vec3d& x = mesh.positions[v];
    const std::size_t before = links.size();
    std::erase_if(links, [&](const Influence& l) {
      if (is_fresh) return crosses_any(anchor(l.particle), x, stroke, eps);
      return !skip[l.particle] && crosses_tear_plane(anchor(l.particle), x, box, eps);
    });
    if (links.size() != before) lost.push_back(v);
  }
  return lost;
}

void renormalize(ParticleSystem& system, const TriMesh& mesh, std::span<const VertexId> vertices,
                 std::span<const TearBox> stroke) {
  const double eps = mesh.eps_side();
  const double reach = 2.0 * system.params.d;
  for (VertexId v : vertices) {
    auto& links = system.map.influence[v];
    if (links.empty()) {
      const Vec3d& x = mesh.positions[v];
      int nearest = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < system.size(); ++j) {
        const double r = (system.particles[j].anchor_rest - x).norm();
        if (r <= reach && r < best && !crosses_any(system.particles[j].anchor_rest, x, stroke, eps)) {
          best = r;
          nearest = j;
        }
      }
      if (nearest >= 0) add_link(system, v, nearest, best, system.params.d);
    }
    if (!links.empty()) normalize_vertex(links);
  }
}

void repair_after_tear(ParticleSystem& system, const TriMesh& mesh, std::span<const TearBox> stroke,
                       std::span<const RimVertex> rim, RepairMode mode) {
  if (stroke.empty()) return;
  const std::vector<VertexId> fresh = assign_rim_vertices(system, mesh, rim);
  const std::vector<VertexId> lost = disconnect_particles(system, mesh, stroke.back(), stroke, rim, fresh, mode);
  renormalize(system, mesh, merge_sorted(lost, fresh), stroke);
}

std::pair<ParticleSystem, ParticleSystem> repair_after_cut(const ParticleSystem& system, const TriMesh& mesh,
                                                           const CutResult& cut, const Planed& plane) {
  const double eps = mesh.eps_side();
  const int original = mesh.vertex_count();
  std::vector<char> positive(system.size());
  for (int j = 0; j < system.size(); ++j)
    positive[j] = plane.signed_distance(system.particles[j].anchor_rest) >= -eps;

  auto build = [&](bool side, const TriMesh& sub, const std::vector<VertexId>& source) {
    ParticleSystem out;
    out.params = system.params;
    std::vector<int> new_id(system.size(), -1);
    std::vector<VertexId> sub_of(original + cut.added_vertices.size(), -1);
    for (VertexId v = 0; v < sub.vertex_count(); ++v) sub_of[source[v]] = v;
    for (int j = 0; j < system.size(); ++j) {
      if (static_cast<bool>(positive[j]) != side) continue;
      Particle q = system.particles[j];
      new_id[j] = q.id = out.size();
      if (q.anchor_vertex >= 0) q.anchor_vertex = sub_of[q.anchor_vertex];
      out.particles.push_back(q);
    }
    out.map.influence.assign(sub.vertex_count(), {});
    out.map.reach.assign(out.particles.size(), 0.0);
    const auto crosses = [&](const Vec3d& a, const Vec3d& b) {
      const double da = plane.signed_distance(a), db = plane.signed_distance(b);
      return (da > eps && db < -eps) || (da < -eps && db > eps);
    };
    std::vector<VertexId> all;
    for (VertexId v = 0; v < sub.vertex_count(); ++v) {
      all.push_back(v);
      const Vec3d& x = sub.positions[v];
      if (source[v] < original) {
        if (static_cast<std::size_t>(source[v]) >= system.map.influence.size()) continue;
        for (const Influence& l : system.map.influence[source[v]]) {
          const int j = new_id[l.particle];
          if (j < 0 || crosses(out.particles[j].anchor_rest, x)) continue;
          out.map.influence[v].push_back({j, l.raw, 0.0});
          out.map.reach[j] = std::max(out.map.reach[j], (out.particles[j].anchor_rest - x).norm());
        }
      } else {
        for (int j = 0; j < out.size(); ++j) {
          const double r = (out.particles[j].anchor_rest - x).norm();
          if (r <= out.params.d && !crosses(out.particles[j].anchor_rest, x)) add_link(out, v, j, r, out.params.d);
        }
      }
    }
    for (const NeighborLink& l : system.map.neighbors) {
      const int a = new_id[l.a], b = new_id[l.b];
      if (a < 0 || b < 0 || crosses(out.particles[a].anchor_rest, out.particles[b].anchor_rest)) continue;
      out.map.neighbors.push_back({std::min(a, b), std::max(a, b), l.weight});
    }
    std::sort(out.map.neighbors.begin(), out.map.neighbors.end(),
              [](const NeighborLink& x, const NeighborLink& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
    for (const auto& [a, b] : system.map.severed)
      if (new_id[a] >= 0 && new_id[b] >= 0) sever(out.map, new_id[a], new_id[b]);
    renormalize(out, sub, all, {});
    return out;
  };
  return {build(true, cut.positive_mesh, cut.positive_source), build(false, cut.negative_mesh, cut.negative_source)};
}

std::vector<int> spawn_slit_particles(ParticleSystem& system, const TriMesh& mesh, std::span<const RimVertex> rim,
                                      std::span<const TearBox> stroke, std::span<const VertexId> touched,
                                      double d_slit, double eps_open) {
  grow_to_mesh(system, mesh);
  std::vector<RimVertex> order(rim.begin(), rim.end());
  std::sort(order.begin(), order.end(), [](const RimVertex& a, const RimVertex& b) { return a.id < b.id; });
  const double eps = mesh.eps_side();
  auto side_of = [&](const RimVertex& r) {
    return stroke[r.box].tear_plane.signed_distance(mesh.positions[r.id]) >= 0.0 ? 1.0 : -1.0;
  };

  std::vector<char> taken(order.size(), 0);
  std::vector<int> created;
  std::vector<VertexId> linked;
  for (std::size_t s = 0; s < order.size(); ++s) {
    if (taken[s]) continue;
    const RimVertex seed = order[s];
    const Vec3d& origin = mesh.positions[seed.id];
    const double sign = side_of(seed);
    for (std::size_t t = s; t < order.size(); ++t)
      if (!taken[t] && side_of(order[t]) == sign && (mesh.positions[order[t].id] - origin).norm() <= d_slit)
        taken[t] = 1;

    Particle q;
    q.id = system.size();
    q.anchor_vertex = seed.id;
    q.anchor_rest = q.anchor_pos = q.center = origin;
    q.rest_offset = sign * eps_open * stroke[seed.box].tear_plane.normal;
    q.slit = true;
    system.particles.push_back(q);
    system.map.reach.push_back(0.0);
    created.push_back(q.id);
    for (VertexId v : touched) {
      const double r = (mesh.positions[v] - origin).norm();
      if (r > d_slit || crosses_any(origin, mesh.positions[v], stroke, eps)) continue;
      add_link(system, v, q.id, r, d_slit);
      linked.push_back(v);
    }
  }
  std::sort(linked.begin(), linked.end());
  linked.erase(std::unique(linked.begin(), linked.end()), linked.end());
  for (VertexId v : linked) normalize_vertex(system.map.influence[v]);
  return created;
}

std::vector<std::string> check_map(const ParticleSystem& system, const TriMesh& mesh) {
  std::vector<std::string> problems;
  const auto& map = system.map;
  for (VertexId v : sampled_vertices(mesh)) {
    if (static_cast<std::size_t>(v) >= map.influence.size()) break;
    const auto& links = map.influence[v];
    if (links.empty()) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < links.size(); ++i) {
      if (links[i].particle < 0 || links[i].particle >= system.size())
        problems.push_back("vertex " + std::to_string(v) + " links unknown particle");
      if (i > 0 && links[i - 1].particle >= links[i].particle)
        problems.push_back("vertex " + std::to_string(v) + " links out of order");
      sum += links[i].weight;
    }
    if (std::abs(sum - 1.0) > 1e-6) problems.push_back("vertex " + std::to_string(v) + " weights sum to " + std::to_string(sum));
  }
  for (std::size_t i = 0; i < map.neighbors.size(); ++i) {
    const NeighborLink& l = map.neighbors[i];
    if (!(l.a < l.b) || l.b >= system.size()) problems.push_back("bad neighbor link");
    if (l.weight < 0.0 || l.weight > 1.0) problems.push_back("neighbor weight out of range");
    if (i > 0 && std::pair(map.neighbors[i - 1].a, map.neighbors[i - 1].b) >= std::pair(l.a, l.b))
      problems.push_back("neighbor links out of order");
  }
  return problems;
}

namespace {

json vec_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }
Vec3d vec_from(const json& j) { return Vec3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

}  // namespace

std::string particles_to_json(const ParticleSystem& system) {
  const ParticleParams& p = system.params;
  json out;
  out["params"] = {{"d", p.d}, {"delta", p.delta}, {"poisson_r", p.poisson_r}, {"seed", p.seed}, {"k", p.k}, {"c", p.c}};
  json particles = json::array();
  for (const Particle& q : system.particles) {
    json e = {{"id", q.id}, {"anchor_vertex", q.anchor_vertex}, {"anchor_pos", vec_json(q.anchor_pos)}};
    if (q.anchor_rest != q.anchor_pos) e["anchor_rest"] = vec_json(q.anchor_rest);
    if (q.slit) {
      e["slit"] = true;
      e["rest_offset"] = vec_json(q.rest_offset);
    }
    particles.push_back(std::move(e));
  }
  out["particles"] = std::move(particles);
  json influence = json::array();
  for (std::size_t v = 0; v < system.map.influence.size(); ++v)
    for (const Influence& l : system.map.influence[v]) influence.push_back(json::array({l.particle, v, l.weight}));
  out["influence"] = std::move(influence);
  json neighbors = json::array();
  for (const NeighborLink& l : system.map.neighbors) neighbors.push_back(json::array({l.a, l.b, l.weight}));
  out["neighbors"] = std::move(neighbors);
  if (!system.map.severed.empty()) out["severed"] = system.map.severed;
  return out.dump(1) + "\n";
}

ParticleSystem particles_from_json(const std::string& text) {
  ParticleSystem s;
  try {
    const json in = json::parse(text);
    const json& p = in.at("params");
    s.params.d = p.at("d").get<double>();
    s.params.delta = p.at("delta").get<double>();
    s.params.poisson_r = p.at("poisson_r").get<double>();
    s.params.seed = p.value("seed", std::uint64_t{0});
    s.params.k = p.value("k", 400.0);
    s.params.c = p.value("c", 12.0);
    for (const json& e : in.at("particles")) {
      Particle q;
      q.id = e.at("id").get<int>();
      if (q.id != s.size()) throw Error(ErrorKind::Parse, "particle ids must be dense and ordered");
      q.anchor_vertex = e.at("anchor_vertex").get<VertexId>();
      q.anchor_pos = q.center = vec_from(e.at("anchor_pos"));
      q.anchor_rest = e.contains("anchor_rest") ? vec_from(e.at("anchor_rest")) : q.anchor_pos;
      q.slit = e.value("slit", false);
      if (e.contains("rest_offset")) q.rest_offset = vec_from(e.at("rest_offset"));
      s.particles.push_back(q);
    }
    for (const json& l : in.at("influence")) {
      const int j = l.at(0).get<int>();
      const auto v = l.at(1).get<std::size_t>();
      const double w = l.at(2).get<double>();
      if (j < 0 || j >= s.size()) throw Error(ErrorKind::Parse, "influence link names unknown particle");
      if (v >= s.map.influence.size()) s.map.influence.resize(v + 1);
      s.map.influence[v].push_back({j, w, w});
    }
    for (auto& links : s.map.influence)
      std::sort(links.begin(), links.end(), [](const Influence& a, const Influence& b) { return a.particle < b.particle; });
    for (const json& l : in.at("neighbors")) {
      const int a = l.at(0).get<int>(), b = l.at(1).get<int>();
      if (a < 0 || b < 0 || a >= s.size() || b >= s.size()) throw Error(ErrorKind::Parse, "neighbor link names unknown particle");
      if (a < b) s.map.neighbors.push_back({a, b, l.at(2).get<double>()});
    }
    if (in.contains("severed")) s.map.severed = in.at("severed").get<std::vector<std::pair<int, int>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("particle map: ") + e.what());
  }
  return s;
}

}  // namespace softcut
