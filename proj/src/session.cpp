#include "softcut/session.hpp"

#include <algorithm>
#include <arpa/inet.h>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <iostream>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include "softcut/obj_io.hpp"
#include "softcut/skinning.hpp"

namespace softcut {

using nlohmann::json;

namespace {

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorKind::Protocol, what); }

Vec3d vec_field(const json& m, const char* key) {
  const json& v = m.at(key);
  if (!v.is_array() || v.size() != 3) violation(std::string("field ") + key + " must be [x, y, z]");
  return Vec3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

json vec_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json vec_list(const std::vector<Vec3d>& vs) {
  json out = json::array();
  for (const Vec3d& v : vs) out.push_back(vec_json(v));
  return out;
}

json error_message(ErrorKind kind, const std::string& what, bool fatal) {
  return {{"type", "Error"}, {"kind", to_string(kind)}, {"message", what}, {"fatal", fatal}};
}

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
}

template <typename T>
void fnv_le(std::uint64_t& h, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    std::reverse(bytes, bytes + sizeof(T));
    fnv(h, bytes, sizeof(T));
  } else {
    fnv(h, &value, sizeof(T));
  }
}

// Appends `src` after the vertices and faces of `dst`.
void append_mesh(TriMesh& dst, const TriMesh& src) {
  const VertexId offset = dst.vertex_count();
  for (VertexId v = 0; v < src.vertex_count(); ++v)
    dst.add_vertex(src.positions[v], src.normals[v], src.uvs[v], src.has_skin() ? src.skin[v] : SkinWeights{});
  for (FaceId f = 0; f < src.face_count(); ++f)
    if (src.alive(f)) dst.add_face(src.faces[f] + Face::Constant(offset));
}

void append_particles(ParticleSystem& dst, const ParticleSystem& src, VertexId vertex_offset) {
  const int offset = dst.size();
  for (Particle q : src.particles) {
    q.id += offset;
    if (q.anchor_vertex >= 0) q.anchor_vertex += vertex_offset;
    dst.particles.push_back(q);
  }
  dst.map.influence.resize(vertex_offset);
  for (std::vector<Influence> links : src.map.influence) {
    for (Influence& l : links) l.particle += offset;
    dst.map.influence.push_back(std::move(links));
  }
  for (NeighborLink n : src.map.neighbors) {
    n.a += offset;
    n.b += offset;
    dst.map.neighbors.push_back(n);
  }
  for (auto [a, b] : src.map.severed) dst.map.severed.emplace_back(a + offset, b + offset);
  dst.map.reach.insert(dst.map.reach.end(), src.map.reach.begin(), src.map.reach.end());
}

}  // namespace

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t mesh_hash(const TriMesh& mesh) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    fnv_le<std::int32_t>(h, f);
    for (int k = 0; k < 3; ++k) fnv_le<std::int32_t>(h, mesh.faces[f][k]);
  }
  for (const Vec3d& p : mesh.positions)
    for (int k = 0; k < 3; ++k) fnv_le<double>(h, p[k]);
  return h;
}

Session::Session(const json& params, std::string base_dir) : base_dir_(std::move(base_dir)) {
  try {
    set_params(params);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("session params: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("session params: ") + e.what());
  }
}

std::vector<json> Session::handle(const json& message) {
  if (closed_) return {error_message(ErrorKind::Protocol, "session is closed", true)};
  try {
    if (!message.is_object() || !message.contains("type") || !message["type"].is_string())
      violation("message must be an object with a string \"type\"");
    return dispatch(message["type"].get<std::string>(), message);
  } catch (const json::exception& e) {
    closed_ = true;
    return {error_message(ErrorKind::Protocol, e.what(), true)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Protocol) closed_ = true;
    return {error_message(e.kind(), e.what(), closed_)};
  } catch (const std::exception& e) {
    return {error_message(ErrorKind::Internal, e.what(), false)};
  }
}

std::vector<json> Session::dispatch(const std::string& type, const json& m) {
  if (type == "LoadMesh") return load_mesh_message(m);
  if (type == "SetParams") return set_params(m);
  if (type == "ScalpelSample") return scalpel_sample(m);
  if (type == "EndStroke") return end_stroke();
  if (type == "CutPlane") return cut_plane(m);
  if (type == "StepSim") return step_sim(m);
  if (type == "ApplyForce") return apply_force(m);
  if (type == "Resync") {
    require_mesh();
    return {mesh_loaded()};
  }
  violation("unknown message type " + type);
}

void Session::require_mesh() const {
  if (!mesh_) violation("no mesh loaded");
}

std::vector<json> Session::load_mesh_message(const json& m) {
  if (stroke_) violation("LoadMesh during a stroke");
  LoadedMesh loaded;
  if (m.contains("obj")) {
    const std::string obj = m["obj"].get<std::string>();
    if (m.contains("sidecar"))
      loaded = load_mesh(obj, m["sidecar"].get<std::string>());
    else
      loaded = load_mesh(obj);
  } else if (m.contains("source")) {
    loaded = load_mesh_source(m["source"].get<std::string>(), base_dir_);
  } else {
    violation("LoadMesh needs \"obj\" or \"source\"");
  }
  const std::uint64_t epoch = mesh_ ? mesh_->epoch + 1 : 0;
  loaded.mesh.epoch = epoch;
  install(std::move(loaded.mesh), std::move(loaded.skeleton), std::nullopt);
  regenerate_particles();
  json reply = mesh_loaded();
  reply["warnings"] = loaded.warnings;
  return {reply};
}

void Session::install(TriMesh mesh, std::optional<Skeleton> skeleton, std::optional<ParticleSystem> particles) {
  pipeline_.reset();
  mesh_ = std::make_unique<TriMesh>(std::move(mesh));
  skeleton_ = std::move(skeleton);
  sections_ = std::make_unique<MeshSections>(build_sections(*mesh_));
  particles_ = std::move(particles);
  pipeline_ = std::make_unique<TearPipeline>(*mesh_, *sections_, particles_ ? &*particles_ : nullptr,
                                             skeleton_ ? &*skeleton_ : nullptr);
  if (!sampling_set_) sampling_ = default_sampling(*mesh_);
  pending_forces_.clear();
  refresh_posed_rest();
  refresh_positions();
}

void Session::regenerate_particles() {
  if (!mesh_) return;
  std::optional<ParticleSystem> ps;
  if (particles_enabled_ && !live_vertices(*mesh_).empty()) {
    ParticleParams p = default_particle_params(*mesh_, seed_);
    const json& o = particle_overrides_;
    p.d = o.value("d", p.d);
    p.delta = o.value("delta", p.delta);
    p.poisson_r = o.value("poisson_r", p.poisson_r);
    p.k = o.value("k", p.k);
    p.c = o.value("c", p.c);
    p.mass = o.value("mass", p.mass);
    p.steepness = o.value("steepness", p.steepness);
    ps = generate_particles(*mesh_, p);
    if (skeleton_ && mesh_->has_skin()) {
      update_skinned_anchors(*ps, *mesh_, *skeleton_);
      for (Particle& q : ps->particles) q.center = q.anchor_pos + q.rest_offset;
    }
  }
  TriMesh mesh = std::move(*mesh_);
  install(std::move(mesh), std::move(skeleton_), std::move(ps));
}

void Session::refresh_posed_rest() {
  posed_rest_ = mesh_->positions;
  if (!skeleton_ || !mesh_->has_skin()) return;
  const std::vector<Eigen::Matrix4d> mats = skeleton_->skinning_matrices();
  for (VertexId v = 0; v < mesh_->vertex_count(); ++v)
    if (!mesh_->skin[v].empty()) posed_rest_[v] = lbs_point(mesh_->positions[v], mesh_->skin[v], mats);
}

void Session::refresh_positions() {
  positions_.resize(mesh_->vertex_count());
  if (posed_rest_.size() != positions_.size()) refresh_posed_rest();
  if (particles_)
    deform(*particles_, posed_rest_, positions_);
  else
    positions_ = posed_rest_;
}

std::vector<json> Session::set_params(const json& m) {
  if (!m.is_object()) violation("SetParams must be an object");
  if (stroke_ && (m.contains("width") || m.contains("distance_threshold") || m.contains("angle_threshold_deg")))
    throw Error(ErrorKind::InvalidParams, "stroke parameters cannot change during a stroke");
  auto positive = [&](const char* key) {
    const double v = m.at(key).get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidParams, std::string(key) + " must be positive");
    return v;
  };
  if (m.contains("width")) width_ = positive("width");
  if (m.contains("distance_threshold")) {
    sampling_.distance_threshold = positive("distance_threshold");
    sampling_set_ = true;
  }
  if (m.contains("angle_threshold_deg")) {
    sampling_.angle_threshold_deg = positive("angle_threshold_deg");
    sampling_set_ = true;
  }
  if (m.contains("dt")) dt_ = positive("dt");
  if (m.contains("slit")) slit_ = m["slit"].get<bool>();

  bool regenerate = false;
  if (m.contains("seed")) {
    seed_ = m["seed"].get<std::uint64_t>();
    regenerate = true;
  }
  if (m.contains("particles")) {
    const json& p = m["particles"];
    if (!p.is_object()) violation("particles must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key == "enabled") {
        particles_enabled_ = value.get<bool>();
      } else if (key == "d" || key == "delta" || key == "poisson_r" || key == "k" || key == "c" || key == "mass" ||
                 key == "steepness") {
        if (!(value.get<double>() > 0.0)) throw Error(ErrorKind::InvalidParams, "particles." + key + " must be positive");
        particle_overrides_[key] = value.get<double>();
      } else {
        violation("unknown particle parameter " + key);
      }
    }
    regenerate = true;
  }
  if (regenerate && mesh_) {
    if (stroke_) throw Error(ErrorKind::InvalidParams, "particles cannot be regenerated during a stroke");
    regenerate_particles();
    return {particle_frame()};
  }
  return {};
}

std::vector<json> Session::tear_boxes(const std::vector<TearBox>& boxes) {
  std::vector<json> out;
  for (const TearBox& box : boxes) {
    SegmentTiming timing;
    const MeshDelta delta = pipeline_->segment(box, stroke_->next_reach(box_index_++), &timing);
    json d = delta_to_json(delta);
    d["type"] = "MeshDelta";
    d["ms"] = timing.total_ms;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<json> Session::scalpel_sample(const json& m) {
  require_mesh();
  const ScalpelSample raw{m.at("t_ms").get<double>(), vec_field(m, "tip"), vec_field(m, "end")};
  if (!stroke_) {
    stroke_width_ = width_ > 0.0 ? width_ : 0.01 * mesh_->bounds().diagonal();
    sampler_.emplace(sampling_);
    stroke_.emplace(stroke_width_);
    box_index_ = 0;
  } else if (!(raw.t_ms > last_t_ms_)) {
    throw Error(ErrorKind::InvalidParams, "t_ms must increase within a stroke");
  }
  last_t_ms_ = raw.t_ms;
  std::vector<TearBox> boxes;
  for (const ScalpelSample& s : sampler_->push(raw))
    for (const TearBox& b : stroke_->push(s)) boxes.push_back(b);
  std::vector<json> out = tear_boxes(boxes);
  if (!out.empty()) {
    refresh_positions();
    out.push_back(particle_frame());
  }
  return out;
}

std::vector<json> Session::end_stroke() {
  require_mesh();
  if (!stroke_) return {};
  std::vector<TearBox> boxes;
  for (const ScalpelSample& s : sampler_->finish())
    for (const TearBox& b : stroke_->push(s)) boxes.push_back(b);
  for (const TearBox& b : stroke_->finish()) boxes.push_back(b);
  std::vector<json> out = tear_boxes(boxes);
  const std::vector<int> spawned = pipeline_->end_stroke(stroke_width_, slit_);
  sampler_.reset();
  stroke_.reset();
  if (!spawned.empty() || !out.empty()) {
    refresh_posed_rest();
    refresh_positions();
    out.push_back(particle_frame());
  }
  return out;
}

std::vector<json> Session::cut_plane(const json& m) {
  require_mesh();
  if (stroke_) throw Error(ErrorKind::InvalidParams, "cannot cut during a tear stroke");
  Planed plane;
  if (m.contains("plane"))
    plane = plane_from_coefficients(m["plane"].get<std::vector<double>>());
  else
    plane = cut_plane_from_samples(vec_field(m, "entry"), vec_field(m, "tip"), vec_field(m, "end"));

  const CutRun run = run_cut(*mesh_, plane);
  const CutResult& r = run.result;
  TriMesh merged = r.positive_mesh;
  const VertexId offset = merged.vertex_count();
  append_mesh(merged, r.negative_mesh);
  merged.epoch = mesh_->epoch + 1;
  merged.tolerance_scale = mesh_->tolerance_scale;
  std::optional<ParticleSystem> ps;
  if (particles_) {
    auto [pos, neg] = repair_after_cut(*particles_, *mesh_, r, plane);
    append_particles(pos, neg, offset);
    ps = std::move(pos);
  }
  install(std::move(merged), std::move(skeleton_), std::move(ps));

  json reply = mesh_loaded();
  reply["parts"] = json::array({{{"first_vertex", 0}, {"vertices", offset}, {"faces", r.positive_mesh.live_face_count()}},
                                {{"first_vertex", offset},
                                 {"vertices", r.negative_mesh.vertex_count()},
                                 {"faces", r.negative_mesh.live_face_count()}}});
  reply["cut"] = {{"intersection_points", r.intersection_points},
                  {"split_faces", r.split_faces},
                  {"no_intersection", r.no_intersection},
                  {"ms", run.ms}};
  reply["warnings"] = run.warnings;
  return {reply};
}

std::vector<json> Session::step_sim(const json& m) {
  require_mesh();
  const int steps = m.value("steps", 1);
  if (steps < 0 || steps > 100000) throw Error(ErrorKind::InvalidParams, "steps must be in [0, 100000]");
  const double dt = m.value("dt", dt_);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidParams, "dt must be positive");

  if (m.contains("pose")) {
    if (!skeleton_ || !mesh_->has_skin()) throw Error(ErrorKind::NoSkin, "pose needs a skinned mesh");
    const json& pose = m["pose"];
    if (!pose.is_array() || static_cast<int>(pose.size()) != skeleton_->size())
      violation("pose must list one 4x4 matrix per bone");
    for (int b = 0; b < skeleton_->size(); ++b) {
      const auto values = pose[b].get<std::vector<double>>();
      if (values.size() != 16) violation("pose matrices are 16 numbers, row-major");
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) skeleton_->bones[b].pose(r, c) = values[4 * r + c];
    }
    if (particles_) {
      std::vector<Vec3d> before;
      for (const Particle& q : particles_->particles) before.push_back(q.anchor_pos);
      update_skinned_anchors(*particles_, *mesh_, *skeleton_);
      // Particles ride along with their anchors; only the springs' own motion is simulated.
      for (std::size_t j = 0; j < before.size(); ++j)
        particles_->particles[j].center += particles_->particles[j].anchor_pos - before[j];
    }
    refresh_posed_rest();
  }

  if (particles_) {
    for (int s = 0; s < steps; ++s) {
      step(*particles_, posed_rest_, positions_, pending_forces_, dt);
      pending_forces_.clear();
    }
  }
  if (!particles_ || steps == 0) refresh_positions();
  steps_ += steps;
  return {particle_frame()};
}

std::vector<json> Session::apply_force(const json& m) {
  require_mesh();
  if (!particles_ || particles_->size() == 0) throw Error(ErrorKind::NoVertices, "no particles to push");
  const Vec3d force = vec_field(m, "force");
  int target = -1;
  if (m.contains("particle")) {
    target = m["particle"].get<int>();
    if (target < 0 || target >= particles_->size()) throw Error(ErrorKind::InvalidParams, "no such particle");
  } else {
    const Vec3d point = vec_field(m, "point");
    double best = std::numeric_limits<double>::infinity();
    for (const Particle& q : particles_->particles) {
      const double d = (q.center - point).squaredNorm();
      if (d < best) best = d, target = q.id;
    }
  }
  const std::pair<int, Vec3d> moved{target, force};
  const std::vector<Vec3d> spread = propagate(*particles_, std::span(&moved, 1));
  pending_forces_.resize(particles_->size(), Vec3d::Zero());
  for (int j = 0; j < particles_->size(); ++j) pending_forces_[j] += spread[j];
  return {};
}

json Session::mesh_loaded() const {
  json faces = json::array();
  for (FaceId f = 0; f < mesh_->face_count(); ++f)
    if (mesh_->alive(f)) faces.push_back(json::array({f, mesh_->faces[f][0], mesh_->faces[f][1], mesh_->faces[f][2]}));
  json centers = json::array(), neighbors = json::array();
  if (particles_) {
    for (const Particle& q : particles_->particles) centers.push_back(vec_json(q.center));
    for (const NeighborLink& n : particles_->map.neighbors) neighbors.push_back(json::array({n.a, n.b}));
  }
  return {{"type", "MeshLoaded"},
          {"protocol", kProtocolVersion},
          {"epoch", mesh_->epoch},
          {"vertices", vec_list(positions_)},
          {"rest", vec_list(mesh_->positions)},
          {"normals", vec_list(mesh_->normals)},
          {"faces", faces},
          {"particles", centers},
          {"neighbors", neighbors},
          {"hash", hash_hex(mesh_hash(*mesh_))}};
}

json Session::particle_frame() const {
  json centers = json::array(), neighbors = json::array();
  if (particles_) {
    for (const Particle& q : particles_->particles) centers.push_back(vec_json(q.center));
    for (const NeighborLink& n : particles_->map.neighbors) neighbors.push_back(json::array({n.a, n.b}));
  }
  return {{"type", "ParticleFrame"},
          {"epoch", mesh_->epoch},
          {"step", steps_},
          {"positions", vec_list(positions_)},
          {"particles", centers},
          {"neighbors", neighbors}};
}

// ---- framing and TCP service ----

namespace {

bool read_exact(int fd, char* data, std::size_t n, bool eof_ok) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, data + got, n - got, 0);
    if (r == 0) {
      if (got == 0 && eof_ok) return false;
      violation("connection closed mid-frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      if (got == 0 && eof_ok) return false;
      violation(std::string("recv: ") + std::strerror(errno));
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

void write_frame(int fd, const std::string& payload) {
  if (payload.size() > kMaxFrameBytes) throw Error(ErrorKind::Protocol, "frame too large");
  const std::uint32_t n = htonl(static_cast<std::uint32_t>(payload.size()));
  std::string buf(reinterpret_cast<const char*>(&n), 4);
  buf += payload;
  std::size_t sent = 0;
  while (sent < buf.size()) {
    const ssize_t w = ::send(fd, buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::Protocol, std::string("send: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(w);
  }
}

bool read_frame(int fd, std::string& payload) {
  std::uint32_t n = 0;
  if (!read_exact(fd, reinterpret_cast<char*>(&n), 4, true)) return false;
  n = ntohl(n);
  if (n > kMaxFrameBytes) violation("frame length " + std::to_string(n) + " exceeds the limit");
  payload.resize(n);
  read_exact(fd, payload.data(), n, false);
  return true;
}

SessionServer::SessionServer(json params, int port, std::string host, std::string base_dir)
    : params_(std::move(params)), base_dir_(std::move(base_dir)) {
  Session probe(params_, base_dir_);  // rejects bad params before binding
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorKind::Internal, std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw Error(ErrorKind::Parse, "bad listen address " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
    const std::string what = std::strerror(errno);
    ::close(listen_fd_);
    throw Error(ErrorKind::Internal, "cannot listen on " + host + ":" + std::to_string(port) + ": " + what);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

SessionServer::~SessionServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SessionServer::serve() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (stopping_) break;
      std::cerr << "accept: " << std::strerror(errno) << "\n";
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { run_connection(fd); });
  }
}

void SessionServer::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  std::vector<std::jthread> workers;
  {
    std::lock_guard lock(mutex_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers = std::move(workers_);
  }
  workers.clear();  // joins
}

void SessionServer::run_connection(int fd) {
  Session session(params_, base_dir_);
  std::string frame;
  try {
    while (read_frame(fd, frame)) {
      std::vector<json> replies;
      try {
        replies = session.handle(json::parse(frame));
      } catch (const json::parse_error& e) {
        replies = {error_message(ErrorKind::Protocol, std::string("bad JSON: ") + e.what(), true)};
      }
      for (const json& r : replies) write_frame(fd, r.dump());
      if (session.closed() || (!replies.empty() && replies.back().value("fatal", false))) break;
    }
  } catch (const Error& e) {
    try {
      write_frame(fd, error_message(e.kind(), e.what(), true).dump());
    } catch (const Error&) {
    }
  }
  ::shutdown(fd, SHUT_RDWR);
  std::lock_guard lock(mutex_);
  open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  ::close(fd);
}

}  // namespace softcut
