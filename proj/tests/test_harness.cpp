#include <doctest.h>

#include <filesystem>
#include <set>

#include "softcut/harness.hpp"
#include "softcut/primitives.hpp"
#include "support.hpp"

using namespace softcut;
using nlohmann::json;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Internal;
}

std::string obj_of(const TriMesh& mesh) { return save_mesh(mesh).obj; }

// Unique undirected edges of live faces whose endpoints lie strictly on
// opposite sides of the plane.
int crossing_edges(const TriMesh& mesh, const Planed& plane) {
  std::set<std::pair<VertexId, VertexId>> edges;
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.alive(f)) continue;
    for (int k = 0; k < 3; ++k) {
      const VertexId a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
      const double da = plane.signed_distance(mesh.positions[a]);
      const double db = plane.signed_distance(mesh.positions[b]);
      const double eps = mesh.eps_side();
      if ((da > eps && db < -eps) || (da < -eps && db > eps)) edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return static_cast<int>(edges.size());
}

Trajectory sphere_trajectory(int segments, double width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Trajectory t;
  t.width = width;
  t.samples = test::random_sphere_stroke(rng, segments);
  return t;
}

}  // namespace

TEST_CASE("trajectory parsing") {
  const Trajectory t = parse_trajectory(R"({"mode": "tear", "width": 0.05, "samples": [
      {"t_ms": 0, "tip": [0, 0, 0.9], "end": [0, 0, 1.5]},
      {"t_ms": 11, "tip": [0.1, 0, 0.9], "end": [0.1, 0, 1.5]}]})");
  CHECK(t.mode == StrokeMode::Tear);
  CHECK(t.width == 0.05);
  REQUIRE(t.samples.size() == 2);
  CHECK(t.samples[1].t_ms == 11.0);
  CHECK(t.samples[1].tip.isApprox(Vec3d(0.1, 0, 0.9)));

  const Trajectory back = parse_trajectory(trajectory_to_json(t));
  CHECK(trajectory_to_json(back) == trajectory_to_json(t));

  CHECK(parse_trajectory(R"({"mode": "cut", "samples": [{"t_ms": 0, "tip": [0,0,0], "end": [0,0,1]},
      {"t_ms": 1, "tip": [1,0,0], "end": [1,0,1]}]})").mode == StrokeMode::Cut);
}

TEST_CASE("malformed trajectories are parse errors") {
  const char* bad[] = {
      "not json",
      R"({"mode": "slice", "samples": []})",
      R"({"mode": "tear", "samples": [{"t_ms": 0, "tip": [0,0,0], "end": [0,0,1]}]})",
      R"({"mode": "tear", "samples": [{"t_ms": 5, "tip": [0,0,0], "end": [0,0,1]},
          {"t_ms": 5, "tip": [1,0,0], "end": [1,0,1]}]})",
      R"({"mode": "tear", "samples": [{"t_ms": 0, "tip": [0,0], "end": [0,0,1]},
          {"t_ms": 1, "tip": [1,0,0], "end": [1,0,1]}]})",
      R"({"mode": "tear", "width": -1, "samples": [{"t_ms": 0, "tip": [0,0,0], "end": [0,0,1]},
          {"t_ms": 1, "tip": [1,0,0], "end": [1,0,1]}]})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(kind_of([&] { parse_trajectory(text); }) == ErrorKind::Parse);
  }
}

TEST_CASE("straight three-segment stroke gives three report entries") {
  const TriMesh mesh = make_icosphere(3);
  Trajectory t;
  t.width = 0.05;
  for (int i = 0; i <= 3; ++i)
    t.samples.push_back({10.0 * i, Vec3d(-0.3 + 0.2 * i, 0, 0.85), Vec3d(-0.3 + 0.2 * i, 0, 1.5)});
  const TearRun run = run_tear(mesh, t, {});
  REQUIRE(run.report.segments.size() == 3);
  for (const SegmentTiming& s : run.report.segments) {
    double sum = 0.0;
    for (double p : s.ms) sum += p;
    CHECK(std::abs(sum - s.total_ms) <= 0.01);
    CHECK(s.removed_faces > 0);
  }
  CHECK(run.mesh.total_area() < mesh.total_area());
  CHECK(validate(run.mesh).empty());

  const json report = report_to_json(run.report);
  REQUIRE(report["segments"].size() == 3);
  for (const char* name : kPhaseNames) CHECK(report["segments"][0].contains(name));
  CHECK(report["mesh"]["particles"].get<int>() == run.particles->size());
}

TEST_CASE("tear runs are deterministic and the delta log replays byte-exactly") {
  const TriMesh mesh = make_icosphere(3);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Trajectory t = sphere_trajectory(4, 0.06, seed);
    TearParams params;
    params.seed = seed;
    const TearRun a = run_tear(mesh, t, params);
    const TearRun b = run_tear(mesh, t, params);
    CHECK(obj_of(a.mesh) == obj_of(b.mesh));
    CHECK(a.delta_log == b.delta_log);
    CHECK(particles_to_json(*a.particles) == particles_to_json(*b.particles));

    TriMesh replayed = mesh;
    replay_delta_log(replayed, a.delta_log);
    CHECK(replayed.epoch == a.mesh.epoch);
    CHECK(replayed.positions == a.mesh.positions);
    CHECK(replayed.faces == a.mesh.faces);
    CHECK(replayed.face_alive == a.mesh.face_alive);
    CHECK(obj_of(replayed) == obj_of(a.mesh));
  }
}

TEST_CASE("parallel deformation matches the serial run") {
  const TriMesh mesh = make_ellipsoid(2527);
  const Trajectory t = default_tear_trajectory(mesh, 3, 0.02);
  TearParams params;
  const TearRun serial = run_tear(mesh, t, params);
  params.parallel = true;
  const TearRun parallel = run_tear(mesh, t, params);
  CHECK(obj_of(serial.mesh) == obj_of(parallel.mesh));
  CHECK(serial.delta_log == parallel.delta_log);
}

TEST_CASE("phase totals reconcile with the wall clock") {
  const TriMesh mesh = make_ellipsoid(2527);
  const Trajectory t = default_tear_trajectory(mesh, 6, 0.02);
  const TearRun run = run_tear(mesh, t, {});
  double total = 0.0;
  for (const SegmentTiming& s : run.report.segments) total += s.total_ms;
  CAPTURE(total);
  CAPTURE(run.report.wall_ms);
  CHECK(total <= run.report.wall_ms);
  CHECK(total >= 0.95 * run.report.wall_ms);
}

TEST_CASE("zero-width stroke leaves the mesh unchanged with a warning") {
  const TriMesh mesh = make_icosphere(2);
  const TearRun run = run_tear(mesh, sphere_trajectory(3, 0.0, 7), {});
  CHECK(obj_of(run.mesh) == obj_of(mesh));
  CHECK(!run.report.warnings.empty());
}

TEST_CASE("run_tear rejects a cut trajectory") {
  Trajectory t = sphere_trajectory(2, 0.05, 1);
  t.mode = StrokeMode::Cut;
  CHECK(kind_of([&] { run_tear(make_icosphere(1), t, {}); }) == ErrorKind::Parse);
}

TEST_CASE("delta JSON round-trips") {
  TriMesh mesh = make_icosphere(2);
  const TearRun run = run_tear(mesh, sphere_trajectory(2, 0.05, 11), {});
  std::istringstream lines(run.delta_log);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    CHECK(delta_to_json(delta_from_json(j)).dump() == line);
    ++count;
  }
  CHECK(count == static_cast<int>(run.report.segments.size()));
  CHECK(kind_of([] { delta_from_json(json::object()); }) == ErrorKind::Parse);
}

TEST_CASE("cut of the unit cube by x = 0 counts every crossing edge") {
  const TriMesh cube = make_cube(1.0);
  const Planed plane = plane_from_coefficients({1, 0, 0, 0});
  const CutRun run = run_cut(cube, plane);
  CHECK(run.result.intersection_points == crossing_edges(cube, plane));
  CHECK(run.warnings.empty());
  const json report = cut_report_to_json(run, plane);
  CHECK(report["intersection_points"].get<int>() == run.result.intersection_points);
  CHECK(report["plane"] == json::array({1.0, 0.0, 0.0, -0.0}));

  for (int i = 0; i < 20; ++i) {
    std::mt19937_64 rng(i);
    const TriMesh sphere = make_icosphere(3);
    const Planed p = Planed::through(test::random_unit(rng) * test::uniform(rng, -0.8, 0.8), test::random_unit(rng));
    CHECK(run_cut(sphere, p).result.intersection_points == crossing_edges(sphere, p));
  }
}

TEST_CASE("plane missing the mesh leaves one output empty with a warning") {
  const CutRun run = run_cut(make_icosphere(2), plane_from_coefficients({0, 0, 1, -5}));
  CHECK(run.result.no_intersection);
  CHECK(run.result.intersection_points == 0);
  CHECK(run.result.positive_mesh.live_face_count() == 0);
  CHECK(run.result.negative_mesh.live_face_count() == 320);
  CHECK(run.warnings.size() == 1);
}

TEST_CASE("plane coefficients and cut trajectories") {
  const Planed p = plane_from_coefficients({0, 2, 0, -1});
  CHECK(p.normal.isApprox(Vec3d::UnitY()));
  CHECK(p.signed_distance(Vec3d(0, 0.5, 0)) == doctest::Approx(0.0));
  CHECK(kind_of([] { plane_from_coefficients({0, 0, 0, 1}); }) == ErrorKind::Parse);
  CHECK(kind_of([] { plane_from_coefficients({1, 0, 0}); }) == ErrorKind::Parse);

  Trajectory t;
  t.mode = StrokeMode::Cut;
  t.samples = {{0, Vec3d(0, 0, 0), Vec3d(0, 0, 1)}, {1, Vec3d(1, 0, 0), Vec3d(1, 0, 1)}};
  const Planed q = plane_from_trajectory(t);
  CHECK(std::abs(q.normal.dot(Vec3d::UnitY())) == doctest::Approx(1.0));

  // The first later sample is collinear with the entry; the second defines the plane.
  t.samples = {{0, Vec3d(0, 0, 0), Vec3d(0, 0, 1)}, {1, Vec3d(0, 0, 0.5), Vec3d(0, 0, 2)},
               {2, Vec3d(0, 1, 0), Vec3d(0, 1, 1)}};
  CHECK(std::abs(plane_from_trajectory(t).normal.dot(Vec3d::UnitX())) == doctest::Approx(1.0));

  t.samples = {{0, Vec3d(0, 0, 0), Vec3d(0, 0, 1)}, {1, Vec3d(0, 0, 2), Vec3d(0, 0, 3)}};
  CHECK(kind_of([&] { plane_from_trajectory(t); }) == ErrorKind::Collinear);
}

TEST_CASE("mesh sources") {
  CHECK(load_mesh_source("icosphere:2").mesh.live_face_count() == 320);
  CHECK(load_mesh_source("cube").mesh.live_face_count() == 12);
  CHECK(load_mesh_source("ellipsoid:386").mesh.vertex_count() == 386);
  CHECK(kind_of([] { load_mesh_source("icosphere:x"); }) == ErrorKind::Parse);
  CHECK(sidecar_path("dir/bunny.obj") == "dir/bunny.skin.json");

  const auto dir = std::filesystem::temp_directory_path() / "softcut_harness_test";
  std::filesystem::create_directories(dir);
  write_text_file((dir / "tri.obj").string(), "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  CHECK(load_mesh_source("tri.obj", dir.string()).mesh.live_face_count() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty bench manifest gives an empty table") {
  const json out = run_bench(json::parse(R"({"cases": []})"), 5);
  CHECK(out["tear"].empty());
  CHECK(out["cut"].empty());
  CHECK(out["budget_factor"].get<double>() == kBudgetFactor);
  CHECK(run_bench(json::object(), 3)["tear"].empty());
}

TEST_CASE("bench over three meshes and five repeats") {
  const json manifest = json::parse(R"({"cases": [
      {"name": "small", "mode": "tear", "mesh": "ellipsoid:386", "segments": 2, "reference": "sphere"},
      {"name": "medium", "mode": "tear", "mesh": "ellipsoid:1200", "segments": 2, "reference": "bunny"},
      {"name": "large", "mode": "tear", "mesh": "icosphere:3", "segments": 2, "reference": "heart"},
      {"name": "cut", "mode": "cut", "mesh": "icosphere:2", "plane": [1, 0, 0, 0]}]})");
  const json out = run_bench(manifest, 5);
  REQUIRE(out["tear"].size() == 3);
  REQUIRE(out["cut"].size() == 1);
  const double want[] = {3.25, 11.19, 18.65};
  for (int i = 0; i < 3; ++i) {
    const json& row = out["tear"][i];
    CHECK(row["repeats"].get<int>() == 5);
    CHECK(row["paper_total_ms"].get<double>() == want[i]);
    CHECK(row["budget_ms"].get<double>() == doctest::Approx(2 * want[i]));
    const json& total = row["total_ms"];
    CHECK(total["min"].get<double>() <= total["median"].get<double>());
    CHECK(total["median"].get<double>() <= total["max"].get<double>());
    for (const char* name : kPhaseNames) CHECK(row["phases"].contains(name));
  }
  CHECK(out["cut"][0]["intersection_points"].get<int>() > 0);
  CHECK(out["cut"][0]["size_class"] == "bone");
}

TEST_CASE("bench manifest errors") {
  CHECK(kind_of([] { run_bench(json::array(), 1); }) == ErrorKind::Parse);
  CHECK(kind_of([] { run_bench(json::parse(R"({"cases": [{"mode": "tear"}]})"), 1); }) == ErrorKind::Parse);
  CHECK(kind_of([] { run_bench(json::parse(R"({"cases": [{"mode": "spin", "mesh": "cube"}]})"), 1); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] { run_bench(json::parse(R"({"cases": [{"mesh": "cube", "reference": "moon"}]})"), 1); }) ==
        ErrorKind::Parse);
}
