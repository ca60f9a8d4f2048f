#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "softcut/primitives.hpp"
#include "softcut/session.hpp"
#include "support.hpp"

using namespace softcut;
using nlohmann::json;

namespace {

json sample_message(const ScalpelSample& s) {
  return {{"type", "ScalpelSample"},
          {"t_ms", s.t_ms},
          {"tip", {s.tip.x(), s.tip.y(), s.tip.z()}},
          {"end", {s.end.x(), s.end.y(), s.end.z()}}};
}

std::vector<json> of_type(const std::vector<json>& replies, const std::string& type) {
  std::vector<json> out;
  for (const json& r : replies)
    if (r["type"] == type) out.push_back(r);
  return out;
}

// Client-side mirror of the server mesh, patched only through deltas.
struct Mirror {
  TriMesh mesh;
  void apply(const json& delta) {
    REQUIRE(delta["base_epoch"].get<std::uint64_t>() == mesh.epoch);
    apply_delta(mesh, delta_from_json(delta));
  }
};

Mirror mirror_of(const json& loaded) {
  Mirror m;
  for (const json& v : loaded["rest"])
    m.mesh.add_vertex(Vec3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>()), Vec3d::UnitZ(),
                      Vec2d::Zero());
  std::vector<json> faces(loaded["faces"].begin(), loaded["faces"].end());
  const int max_id = faces.empty() ? -1 : faces.back()[0].get<int>();
  m.mesh.faces.assign(max_id + 1, Face::Zero());
  m.mesh.face_alive.assign(max_id + 1, 0);
  for (const json& f : faces) {
    const int id = f[0].get<int>();
    m.mesh.faces[id] = Face(f[1].get<int>(), f[2].get<int>(), f[3].get<int>());
    m.mesh.face_alive[id] = 1;
  }
  m.mesh.epoch = loaded["epoch"].get<std::uint64_t>();
  return m;
}

double max_offset(const json& frame, const json& rest) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(frame["positions"][i][k].get<double>() - rest[i][k].get<double>()));
  return worst;
}

}  // namespace

TEST_CASE("LoadMesh replies MeshLoaded") {
  Session s;
  const auto replies = s.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}});
  REQUIRE(replies.size() == 1);
  const json& r = replies[0];
  CHECK(r["type"] == "MeshLoaded");
  CHECK(r["protocol"] == kProtocolVersion);
  CHECK(r["vertices"].size() == 642);
  CHECK(r["faces"].size() == 1280);
  CHECK(r["particles"].size() > 0);
  CHECK(r["hash"] == hash_hex(mesh_hash(s.mesh())));

  Session t;
  const auto inline_obj = t.handle({{"type", "LoadMesh"}, {"obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"}});
  CHECK(inline_obj[0]["faces"].size() == 1);
}

TEST_CASE("protocol violations are fatal and close the session") {
  {
    Session s;
    const auto r = s.handle({{"type", "StepSim"}});
    REQUIRE(r.size() == 1);
    CHECK(r[0]["type"] == "Error");
    CHECK(r[0]["kind"] == "ProtocolError");
    CHECK(r[0]["fatal"] == true);
    CHECK(s.closed());
    CHECK(s.handle({{"type", "LoadMesh"}, {"source", "cube"}})[0]["fatal"] == true);
  }
  for (const json& bad : {json{{"type", "Dance"}}, json::array({1, 2}), json{{"kind", "LoadMesh"}},
                          json{{"type", "LoadMesh"}}, json{{"type", "LoadMesh"}, {"source", 3}}}) {
    Session s;
    CAPTURE(bad.dump());
    const auto r = s.handle(bad);
    CHECK(r[0]["fatal"] == true);
  }
  Session s;
  s.handle({{"type", "LoadMesh"}, {"source", "icosphere:2"}});
  CHECK(s.handle({{"type", "ScalpelSample"}, {"t_ms", 0}, {"tip", {0, 0}}, {"end", {0, 0, 1}}})[0]["fatal"] == true);
}

TEST_CASE("recoverable errors keep the session open") {
  Session s;
  s.handle({{"type", "LoadMesh"}, {"source", "icosphere:2"}});
  auto r = s.handle({{"type", "SetParams"}, {"width", -1}});
  CHECK(r[0]["kind"] == "InvalidParams");
  CHECK(r[0]["fatal"] == false);
  r = s.handle({{"type", "CutPlane"}, {"entry", {0, 0, 0}}, {"tip", {0, 0, 1}}, {"end", {0, 0, 2}}});
  CHECK(r[0]["kind"] == "Collinear");
  CHECK(r[0]["fatal"] == false);
  r = s.handle({{"type", "StepSim"}, {"pose", json::array()}});
  CHECK(r[0]["kind"] == "NoSkin");
  CHECK(!s.closed());
  CHECK(s.handle({{"type", "StepSim"}})[0]["type"] == "ParticleFrame");
}

TEST_CASE("a stroke yields one MeshDelta per accepted segment and the mirror stays in sync") {
  const TriMesh sphere = make_icosphere(3);
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    Session s(json{{"width", 0.05}});
    const json loaded = s.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}})[0];
    Mirror mirror = mirror_of(loaded);

    std::mt19937_64 rng(seed);
    // Dense raw poses: the server-side sampler decides which become segments.
    std::vector<ScalpelSample> raw = test::random_sphere_stroke(rng, 30, 1.0, 0.03);
    std::vector<json> replies;
    for (const ScalpelSample& p : raw) {
      auto r = s.handle(sample_message(p));
      replies.insert(replies.end(), r.begin(), r.end());
    }
    auto tail = s.handle({{"type", "EndStroke"}});
    replies.insert(replies.end(), tail.begin(), tail.end());

    const std::vector<ScalpelSample> accepted = sample_stroke(raw, default_sampling(sphere));
    const std::size_t boxes = build_tear_boxes(accepted, 0.05).size();
    const auto deltas = of_type(replies, "MeshDelta");
    CHECK(deltas.size() == boxes);
    CHECK(boxes >= 2);
    CHECK(of_type(replies, "Error").empty());
    for (const json& d : deltas) mirror.apply(d);

    const json snapshot = s.handle({{"type", "Resync"}})[0];
    CHECK(snapshot["epoch"].get<std::uint64_t>() == mirror.mesh.epoch);
    CHECK(hash_hex(mesh_hash(mirror.mesh)) == snapshot["hash"]);
    CHECK(check_map(*s.particles(), s.mesh()).empty());
  }
}

TEST_CASE("StepSim without interaction keeps the rest pose") {
  Session s;
  const json loaded = s.handle({{"type", "LoadMesh"}, {"source", "ellipsoid:800"}})[0];
  for (int i = 0; i < 90; ++i) {
    const auto r = s.handle({{"type", "StepSim"}, {"dt", 1.0 / 90.0}});
    REQUIRE(r.size() == 1);
    REQUIRE(r[0]["type"] == "ParticleFrame");
    CHECK(max_offset(r[0], loaded["rest"]) <= 1e-9);
  }
}

TEST_CASE("ApplyForce moves the mesh on the next step and the springs bring it back") {
  Session s;
  const json loaded = s.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}})[0];
  CHECK(s.handle({{"type", "ApplyForce"}, {"point", {0, 0, 1}}, {"force", {0, 0, 300}}}).empty());
  const json moved = s.handle({{"type", "StepSim"}, {"steps", 5}})[0];
  const double peak = max_offset(moved, loaded["rest"]);
  CHECK(peak > 1e-4);
  const json settled = s.handle({{"type", "StepSim"}, {"steps", 600}})[0];
  CHECK(max_offset(settled, loaded["rest"]) < 0.01 * peak);
  CHECK(s.handle({{"type", "ApplyForce"}, {"particle", 100000}, {"force", {0, 0, 1}}})[0]["kind"] == "InvalidParams");
}

TEST_CASE("CutPlane splits the session mesh in two parts") {
  Session s;
  const json loaded = s.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}})[0];
  const double area = s.mesh().total_area();
  const auto r = s.handle({{"type", "CutPlane"}, {"entry", {0, -2, 0.1}}, {"tip", {0, 2, 0.1}}, {"end", {1, 0, 0.1}}});
  REQUIRE(r.size() == 1);
  CHECK(r[0]["type"] == "MeshLoaded");
  CHECK(r[0]["epoch"].get<std::uint64_t>() == loaded["epoch"].get<std::uint64_t>() + 1);
  CHECK(r[0]["parts"].size() == 2);
  CHECK(r[0]["cut"]["intersection_points"].get<int>() > 0);
  CHECK(test::relative_error(s.mesh().total_area(), area) <= 1e-9);
  CHECK(check_map(*s.particles(), s.mesh()).empty());
  CHECK(validate(s.mesh()).empty());

  const auto miss = s.handle({{"type", "CutPlane"}, {"plane", {0, 0, 1, -9}}});
  CHECK(miss[0]["cut"]["no_intersection"] == true);
  CHECK(miss[0]["warnings"].size() == 1);
}

TEST_CASE("SetParams regenerates particles and rejects stroke changes mid-stroke") {
  Session s;
  s.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}});
  const int before = s.particles()->size();
  const auto r = s.handle({{"type", "SetParams"}, {"particles", {{"poisson_r", 0.4}}}});
  REQUIRE(r.size() == 1);
  CHECK(r[0]["type"] == "ParticleFrame");
  CHECK(s.particles()->size() < before);
  CHECK(s.handle({{"type", "SetParams"}, {"particles", {{"spin", 1}}}})[0]["fatal"] == true);

  Session t(json{{"width", 0.05}});
  t.handle({{"type", "LoadMesh"}, {"source", "icosphere:3"}});
  t.handle(sample_message({0, Vec3d(0, 0, 0.9), Vec3d(0, 0, 1.5)}));
  CHECK(t.handle({{"type", "SetParams"}, {"width", 0.1}})[0]["kind"] == "InvalidParams");
  CHECK(t.handle(sample_message({0, Vec3d(0.1, 0, 0.9), Vec3d(0.1, 0, 1.5)}))[0]["kind"] == "InvalidParams");
  t.handle({{"type", "EndStroke"}});
  CHECK(t.handle({{"type", "SetParams"}, {"width", 0.1}}).empty());
}

TEST_CASE("mesh hash tracks geometry and topology") {
  TriMesh a = make_icosphere(1);
  const std::uint64_t h = mesh_hash(a);
  CHECK(mesh_hash(make_icosphere(1)) == h);
  a.positions[3].x() += 1e-12;
  CHECK(mesh_hash(a) != h);
  TriMesh b = make_icosphere(1);
  b.face_alive[0] = 0;
  CHECK(mesh_hash(b) != h);
  CHECK(hash_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
  CHECK(hash_hex(1) == "0000000000000001");
}

TEST_CASE("TCP round trip with length-prefixed frames") {
  SessionServer server(json{{"width", 0.05}}, 0);
  REQUIRE(server.port() > 0);
  std::jthread loop([&] { server.serve(); });

  auto connect_client = [&] {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(server.port()));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    return fd;
  };
  auto ask = [](int fd, const json& m) {
    write_frame(fd, m.dump());
    std::string reply;
    REQUIRE(read_frame(fd, reply));
    return json::parse(reply);
  };

  const int a = connect_client();
  const int b = connect_client();
  const json la = ask(a, {{"type", "LoadMesh"}, {"source", "icosphere:2"}});
  const json lb = ask(b, {{"type", "LoadMesh"}, {"source", "cube"}});
  CHECK(la["faces"].size() == 320);
  CHECK(lb["faces"].size() == 12);
  CHECK(ask(a, {{"type", "StepSim"}})["type"] == "ParticleFrame");

  const json err = ask(b, {{"type", "Bogus"}});
  CHECK(err["fatal"] == true);
  std::string rest;
  CHECK(!read_frame(b, rest));  // server closed the connection

  // Sessions are independent: a still works after b was dropped.
  CHECK(ask(a, {{"type", "Resync"}})["hash"] == la["hash"]);

  // Garbage payload on a fresh connection.
  const int c = connect_client();
  const json garbage = ask(c, json("not an object"));
  CHECK(garbage["kind"] == "ProtocolError");
  ::close(a);
  ::close(b);
  ::close(c);
  server.stop();
}
