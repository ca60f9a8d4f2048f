#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "softcut/harness.hpp"

namespace softcut {

constexpr int kProtocolVersion = 1;

/// Frames larger than this are a protocol violation.
constexpr std::uint32_t kMaxFrameBytes = 256u << 20;

/// FNV-1a 64 over the live faces (id, a, b, c as little-endian int32, in id
/// order) followed by every vertex position (x, y, z as little-endian
/// float64). Clients recompute it to check they hold the same mesh.
std::uint64_t mesh_hash(const TriMesh& mesh);
/// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t hash);

/// One interactive session: owns a mesh, its particles and the stroke in
/// progress. Not thread-safe; the server gives every connection its own.
class Session {
 public:
  /// `params` has the SetParams fields; `base_dir` resolves LoadMesh sources.
  explicit Session(const nlohmann::json& params = nlohmann::json::object(), std::string base_dir = ".");

  /// Handles one request and returns the replies in order. Recoverable
  /// failures come back as non-fatal Error messages. Protocol violations
  /// yield a fatal Error message, after which the session refuses everything.
  std::vector<nlohmann::json> handle(const nlohmann::json& message);

  bool closed() const { return closed_; }
  bool loaded() const { return mesh_ != nullptr; }
  const TriMesh& mesh() const { return *mesh_; }
  const ParticleSystem* particles() const { return particles_ ? &*particles_ : nullptr; }
  /// Vertex positions of the latest ParticleFrame.
  const std::vector<Vec3d>& positions() const { return positions_; }

 private:
  std::vector<nlohmann::json> dispatch(const std::string& type, const nlohmann::json& m);
  std::vector<nlohmann::json> load_mesh_message(const nlohmann::json& m);
  std::vector<nlohmann::json> set_params(const nlohmann::json& m);
  std::vector<nlohmann::json> scalpel_sample(const nlohmann::json& m);
  std::vector<nlohmann::json> end_stroke();
  std::vector<nlohmann::json> cut_plane(const nlohmann::json& m);
  std::vector<nlohmann::json> step_sim(const nlohmann::json& m);
  std::vector<nlohmann::json> apply_force(const nlohmann::json& m);

  void install(TriMesh mesh, std::optional<Skeleton> skeleton, std::optional<ParticleSystem> particles);
  void regenerate_particles();
  void refresh_posed_rest();
  void refresh_positions();
  std::vector<nlohmann::json> tear_boxes(const std::vector<TearBox>& boxes);
  nlohmann::json mesh_loaded() const;
  nlohmann::json particle_frame() const;
  void require_mesh() const;

  std::string base_dir_;
  double width_ = 0.0;  // non-positive: 1% of the mesh diagonal
  StrokeSampling sampling_{};
  bool sampling_set_ = false;
  double dt_ = 1.0 / 90.0;
  bool slit_ = true;
  std::uint64_t seed_ = 0;
  nlohmann::json particle_overrides_ = nlohmann::json::object();
  bool particles_enabled_ = true;

  std::unique_ptr<TriMesh> mesh_;
  std::optional<Skeleton> skeleton_;
  std::unique_ptr<MeshSections> sections_;
  std::optional<ParticleSystem> particles_;
  std::unique_ptr<TearPipeline> pipeline_;
  std::optional<StrokeSampler> sampler_;
  std::optional<TearStroke> stroke_;
  std::size_t box_index_ = 0;
  double last_t_ms_ = 0.0;
  double stroke_width_ = 0.0;
  std::vector<Vec3d> posed_rest_;
  std::vector<Vec3d> positions_;
  std::vector<Vec3d> pending_forces_;
  std::uint64_t steps_ = 0;
  bool closed_ = false;
};

/// Writes one frame: 4-byte big-endian length, then the UTF-8 JSON text.
void write_frame(int fd, const std::string& payload);
/// Reads one frame. Returns false on a clean end of stream before a frame
/// starts; throws Protocol on truncation or an oversized length.
bool read_frame(int fd, std::string& payload);

/// TCP service: one Session per connection, each on its own thread.
class SessionServer {
 public:
  /// Binds `host:port` (port 0 picks a free one) and starts listening.
  SessionServer(nlohmann::json params, int port, std::string host = "127.0.0.1", std::string base_dir = ".");
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  int port() const { return port_; }

  /// Accepts connections until stop() is called.
  void serve();
  /// Stops accepting, closes open connections and joins their threads.
  void stop();

 private:
  void run_connection(int fd);

  nlohmann::json params_;
  std::string base_dir_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> open_fds_;
  std::vector<std::jthread> workers_;
};

}  // namespace softcut
