#include "softcut/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "softcut/primitives.hpp"

namespace softcut {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Vec3d vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, "expected a 3-element array");
  return Vec3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json stats(const std::vector<double>& v) {
  if (v.empty()) return {{"median", 0.0}, {"min", 0.0}, {"max", 0.0}};
  return {{"median", median(v)}, {"min", *std::min_element(v.begin(), v.end())},
          {"max", *std::max_element(v.begin(), v.end())}};
}

}  // namespace

Trajectory parse_trajectory(const std::string& text) {
  Trajectory t;
  try {
    const json in = json::parse(text);
    const std::string mode = in.at("mode").get<std::string>();
    if (mode == "tear")
      t.mode = StrokeMode::Tear;
    else if (mode == "cut")
      t.mode = StrokeMode::Cut;
    else
      throw Error(ErrorKind::Parse, "trajectory mode must be \"tear\" or \"cut\"");
    t.width = in.value("width", 0.0);
    for (const json& s : in.at("samples"))
      t.samples.push_back({s.at("t_ms").get<double>(), vec_from(s.at("tip")), vec_from(s.at("end"))});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("trajectory: ") + e.what());
  }
  if (t.samples.size() < 2) throw Error(ErrorKind::Parse, "trajectory needs at least two samples");
  for (std::size_t i = 1; i < t.samples.size(); ++i)
    if (!(t.samples[i].t_ms > t.samples[i - 1].t_ms))
      throw Error(ErrorKind::Parse, "trajectory t_ms must be strictly increasing (sample " + std::to_string(i) + ")");
  if (t.width < 0) throw Error(ErrorKind::Parse, "trajectory width must be non-negative");
  return t;
}

std::string trajectory_to_json(const Trajectory& t) {
  json out = {{"mode", t.mode == StrokeMode::Tear ? "tear" : "cut"}, {"width", t.width}, {"samples", json::array()}};
  for (const ScalpelSample& s : t.samples)
    out["samples"].push_back({{"t_ms", s.t_ms}, {"tip", vec_json(s.tip)}, {"end", vec_json(s.end)}});
  return out.dump(1) + "\n";
}

json report_to_json(const PhaseReport& report) {
  json segments = json::array();
  std::array<double, kPhaseCount> totals{};
  double total = 0.0;
  for (const SegmentTiming& s : report.segments) {
    json e;
    for (int p = 0; p < kPhaseCount; ++p) {
      e[kPhaseNames[p]] = s.ms[p];
      totals[p] += s.ms[p];
    }
    e["total"] = s.total_ms;
    e["removed_faces"] = s.removed_faces;
    e["added_faces"] = s.added_faces;
    e["added_vertices"] = s.added_vertices;
    total += s.total_ms;
    segments.push_back(std::move(e));
  }
  json phase_totals;
  for (int p = 0; p < kPhaseCount; ++p) phase_totals[kPhaseNames[p]] = totals[p];
  phase_totals["total"] = total;
  return {{"segments", segments},
          {"totals", phase_totals},
          {"wall_ms", report.wall_ms},
          {"mesh", {{"vertices", report.vertices}, {"faces", report.faces}, {"particles", report.particles}}},
          {"warnings", report.warnings}};
}

json delta_to_json(const MeshDelta& d) {
  json vertices = json::array();
  for (const AddedVertex& v : d.added_vertices) {
    json skin = json::array();
    for (const BoneWeight& w : v.skin) skin.push_back(json::array({w.bone, w.weight}));
    vertices.push_back({{"id", v.id},
                        {"position", vec_json(v.position)},
                        {"normal", vec_json(v.normal)},
                        {"uv", json::array({v.uv.x(), v.uv.y()})},
                        {"skin", skin},
                        {"parents", json::array({v.parent_a, v.parent_b})},
                        {"t", v.t}});
  }
  json faces = json::array();
  for (const AddedFace& f : d.added_faces)
    faces.push_back(json::array({f.id, f.vertices[0], f.vertices[1], f.vertices[2]}));
  return {{"base_epoch", d.base_epoch},
          {"epoch", d.epoch},
          {"added_vertices", vertices},
          {"removed_faces", d.removed_faces},
          {"added_faces", faces}};
}

MeshDelta delta_from_json(const json& j) {
  MeshDelta d;
  try {
    d.base_epoch = j.at("base_epoch").get<std::uint64_t>();
    d.epoch = j.at("epoch").get<std::uint64_t>();
    for (const json& v : j.at("added_vertices")) {
      AddedVertex a;
      a.id = v.at("id").get<VertexId>();
      a.position = vec_from(v.at("position"));
      a.normal = vec_from(v.at("normal"));
      a.uv = Vec2d(v.at("uv").at(0).get<double>(), v.at("uv").at(1).get<double>());
      for (const json& w : v.at("skin")) a.skin.push_back({w.at(0).get<int>(), w.at(1).get<double>()});
      a.parent_a = v.at("parents").at(0).get<VertexId>();
      a.parent_b = v.at("parents").at(1).get<VertexId>();
      a.t = v.at("t").get<double>();
      d.added_vertices.push_back(std::move(a));
    }
    d.removed_faces = j.at("removed_faces").get<std::vector<FaceId>>();
    for (const json& f : j.at("added_faces"))
      d.added_faces.push_back({f.at(0).get<FaceId>(), Face(f.at(1).get<int>(), f.at(2).get<int>(), f.at(3).get<int>())});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("delta: ") + e.what());
  }
  return d;
}

void replay_delta_log(TriMesh& mesh, const std::string& log) {
  std::istringstream lines(log);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, "delta log line " + std::to_string(number) + ": " + e.what());
    }
    apply_delta(mesh, delta_from_json(j));
  }
}

TearPipeline::TearPipeline(TriMesh& mesh, MeshSections& sections, ParticleSystem* particles,
                           const Skeleton* skeleton, RepairMode repair, int threads)
    : mesh_(mesh), sections_(sections), particles_(particles), skeleton_(skeleton), repair_(repair),
      threads_(std::max(1, threads)) {
  refresh_deformed();
}

void TearPipeline::refresh_deformed() {
  deformed_.resize(mesh_.vertex_count());
  if (!particles_) {
    std::copy(mesh_.positions.begin(), mesh_.positions.end(), deformed_.begin());
  } else if (threads_ > 1) {
    deform_parallel(*particles_, mesh_.positions, deformed_, threads_);
  } else {
    deform(*particles_, mesh_.positions, deformed_);
  }
}

MeshDelta TearPipeline::segment(const TearBox& box, double next_reach, SegmentTiming* timing, std::string* log) {
  SegmentTiming seg;
  TearOptions options;
  options.interpolate_skin = false;
  options.next_reach = next_reach;
  auto t = Clock::now();
  MeshDelta delta = tear_segment(mesh_, sections_, box, state_, options);
  seg.ms[PerformTear] = ms_since(t);

  t = Clock::now();
  fill_skin_weights(mesh_, delta);
  if (particles_ && skeleton_ && mesh_.has_skin()) update_skinned_anchors(*particles_, mesh_, *skeleton_);
  seg.ms[CalculateBoneweights] = ms_since(t);

  if (particles_ && !delta.removed_faces.empty()) {
    t = Clock::now();
    const std::vector<VertexId> fresh = assign_rim_vertices(*particles_, mesh_, state_.rim_vertices);
    seg.ms[UpdateParticles] = ms_since(t);
    t = Clock::now();
    std::vector<VertexId> lost =
        disconnect_particles(*particles_, mesh_, box, state_.boxes_so_far, state_.rim_vertices, fresh, repair_);
    seg.ms[DisconnectParticles] = ms_since(t);
    t = Clock::now();
    lost.insert(lost.end(), fresh.begin(), fresh.end());
    std::sort(lost.begin(), lost.end());
    lost.erase(std::unique(lost.begin(), lost.end()), lost.end());
    renormalize(*particles_, mesh_, lost, state_.boxes_so_far);
    seg.ms[UpdateParticles] += ms_since(t);
  }
  rim_.insert(rim_.end(), state_.rim_vertices.begin(), state_.rim_vertices.end());
  touched_.insert(touched_.end(), state_.touched_vertices.begin(), state_.touched_vertices.end());

  t = Clock::now();
  if (log) {
    *log += delta_to_json(delta).dump();
    *log += '\n';
  }
  refresh_deformed();
  seg.ms[UpdateMesh] = ms_since(t);

  if (timing) {
    for (double p : seg.ms) seg.total_ms += p;
    seg.removed_faces = static_cast<int>(delta.removed_faces.size());
    seg.added_faces = static_cast<int>(delta.added_faces.size());
    seg.added_vertices = static_cast<int>(delta.added_vertices.size());
    *timing = seg;
  }
  return delta;
}

std::vector<int> TearPipeline::end_stroke(double width, bool slit) {
  std::vector<int> spawned;
  if (particles_ && slit && !rim_.empty()) {
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    spawned = spawn_slit_particles(*particles_, mesh_, rim_, state_.boxes_so_far, touched_,
                                   particles_->params.poisson_r, 0.2 * width);
    refresh_deformed();
  }
  state_ = TearState{};
  rim_.clear();
  touched_.clear();
  return spawned;
}

TearRun run_tear(const TriMesh& input, const Trajectory& trajectory, const TearParams& params,
                 const Skeleton* skeleton) {
  if (trajectory.mode != StrokeMode::Tear) throw Error(ErrorKind::Parse, "trajectory mode is not tear");
  TearRun run;
  run.mesh = input;
  TriMesh& mesh = run.mesh;
  const double width = params.width > 0.0 ? params.width : trajectory.width;
  MeshSections sections = build_sections(mesh, params.section_target);
  if (params.particles) {
    ParticleParams pp = params.particle_params.value_or(default_particle_params(mesh, params.seed));
    pp.seed = params.seed;
    run.particles = generate_particles(mesh, pp);
  }
  const int threads = params.parallel ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : 1;
  TearPipeline pipeline(mesh, sections, run.particles ? &*run.particles : nullptr, skeleton, params.repair, threads);

  TearStroke stroke(width);
  std::size_t box_index = 0;
  auto process = [&](const TearBox& box) {
    SegmentTiming seg;
    pipeline.segment(box, stroke.next_reach(box_index++), &seg, &run.delta_log);
    run.report.segments.push_back(seg);
  };

  const auto wall = Clock::now();
  for (const ScalpelSample& s : trajectory.samples)
    for (const TearBox& box : stroke.push(s)) process(box);
  for (const TearBox& box : stroke.finish()) process(box);

  const auto t = Clock::now();
  pipeline.end_stroke(width, params.slit_particles);
  if (!run.report.segments.empty()) {
    const double ms = ms_since(t);
    run.report.segments.back().ms[UpdateParticles] += ms;
    run.report.segments.back().total_ms += ms;
  }
  run.report.wall_ms = ms_since(wall);

  if (run.report.segments.empty()) run.report.warnings.push_back("trajectory produced no tear segment");
  if (width <= 0.0) run.report.warnings.push_back("zero tear width: the mesh is left unchanged");
  run.report.vertices = static_cast<int>(live_vertices(mesh).size());
  run.report.faces = mesh.live_face_count();
  run.report.particles = run.particles ? run.particles->size() : 0;
  return run;
}

Planed plane_from_trajectory(const Trajectory& trajectory) {
  if (trajectory.samples.size() < 2) throw Error(ErrorKind::Parse, "cut trajectory needs two samples");
  const Vec3d entry = trajectory.samples.front().tip;
  for (std::size_t i = 1; i < trajectory.samples.size(); ++i) {
    try {
      return cut_plane_from_samples(entry, trajectory.samples[i].tip, trajectory.samples[i].end);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Collinear) throw;
    }
  }
  throw Error(ErrorKind::Collinear, "every sample is collinear with the entry point");
}

Planed plane_from_coefficients(const std::vector<double>& p) {
  if (p.size() != 4) throw Error(ErrorKind::Parse, "plane needs four coefficients a,b,c,d");
  const Vec3d n(p[0], p[1], p[2]);
  const double len = n.norm();
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(p[3]))
    throw Error(ErrorKind::Parse, "plane normal must be finite and non-zero");
  return Planed{n / len, -p[3] / len};
}

CutRun run_cut(const TriMesh& mesh, const Planed& plane) {
  CutRun run;
  const auto t = Clock::now();
  run.result = cut(mesh, plane);
  run.ms = ms_since(t);
  if (run.result.no_intersection) run.warnings.push_back("plane misses the mesh; one output is empty");
  return run;
}

json cut_report_to_json(const CutRun& run, const Planed& plane) {
  auto side = [](const TriMesh& m) {
    return json{{"vertices", m.vertex_count()}, {"faces", m.live_face_count()}, {"area", m.total_area()}};
  };
  return {{"plane", json::array({plane.normal.x(), plane.normal.y(), plane.normal.z(), -plane.offset})},
          {"intersection_points", run.result.intersection_points},
          {"split_faces", run.result.split_faces},
          {"seam_vertices", run.result.seam_vertex_pairs.size()},
          {"positive", side(run.result.positive_mesh)},
          {"negative", side(run.result.negative_mesh)},
          {"no_intersection", run.result.no_intersection},
          {"ms", run.ms},
          {"warnings", run.warnings}};
}

LoadedMesh load_mesh_source(const std::string& source, const std::string& base_dir) {
  const auto colon = source.find(':');
  const std::string kind = source.substr(0, colon);
  LoadedMesh out;
  try {
    if (kind == "ellipsoid" && colon != std::string::npos) {
      out.mesh = make_ellipsoid(std::stoi(source.substr(colon + 1)));
      return out;
    }
    if (kind == "icosphere" && colon != std::string::npos) {
      out.mesh = make_icosphere(std::stoi(source.substr(colon + 1)));
      return out;
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "bad mesh source " + source);
  }
  if (source == "cube") {
    out.mesh = make_cube(1.0);
    return out;
  }
  const std::filesystem::path path = std::filesystem::path(base_dir) / source;
  const std::filesystem::path sidecar = sidecar_path(path.string());
  if (std::filesystem::exists(sidecar)) return load_mesh(read_text_file(path.string()), read_text_file(sidecar.string()));
  return load_mesh(read_text_file(path.string()));
}

std::string sidecar_path(const std::string& obj_path) {
  std::filesystem::path p(obj_path);
  p.replace_extension(".skin.json");
  return p.string();
}

const std::array<TearReference, 3> kTearReferences = {{
    {"sphere", 515, 768, {0.36, 0.39, 0.91, 0.90, 0.07}, 3.25},
    {"bunny", 2527, 4968, {3.0, 2.01, 1.25, 3.81, 0.24}, 11.19},
    {"heart", 9747, 18336, {2.54, 0.87, 2.63, 11.04, 0.76}, 18.65},
}};

const std::array<CutReference, 3> kCutReferences = {{
    {"bone", 516, 983, 64, 12.0},
    {"bunny", 2527, 4968, 356, 17.29},
    {"small_cactus", 2976, 3000, 186, 13.49},
}};

Trajectory default_tear_trajectory(const TriMesh& mesh, int segments, double width) {
  const Aabbd b = mesh.bounds();
  const Vec3d c = b.center();
  const Vec3d half = 0.5 * b.extent();
  const double step = 0.02 * b.diagonal();
  Trajectory t;
  t.width = width;
  const double x0 = c.x() - 0.5 * step * segments;
  for (int i = 0; i <= segments; ++i) {
    const double x = x0 + step * i;
    t.samples.push_back({10.0 * i, Vec3d(x, c.y(), c.z() + 0.8 * half.z()), Vec3d(x, c.y(), c.z() + 1.5 * half.z())});
  }
  return t;
}

namespace {

template <typename Ref>
const Ref& pick_reference(const std::array<Ref, 3>& refs, const json& entry, int faces) {
  if (entry.contains("reference")) {
    const std::string name = entry.at("reference").get<std::string>();
    for (const Ref& r : refs)
      if (name == r.size_class) return r;
    throw Error(ErrorKind::Parse, "unknown reference class " + name);
  }
  const Ref* best = &refs[0];
  for (const Ref& r : refs)
    if (std::abs(std::log(double(r.faces) / faces)) < std::abs(std::log(double(best->faces) / faces))) best = &r;
  return *best;
}

json bench_tear(const json& entry, const TriMesh& mesh, int repeats, const std::string& base_dir) {
  Trajectory traj;
  if (entry.contains("trajectory")) {
    traj = parse_trajectory(read_text_file((std::filesystem::path(base_dir) / entry.at("trajectory").get<std::string>()).string()));
  } else {
    traj = default_tear_trajectory(mesh, entry.value("segments", 3), 0.0);
  }
  TearParams params;
  params.width = entry.value("width", traj.width > 0 ? traj.width : 0.01 * mesh.bounds().diagonal());
  params.seed = entry.value("seed", std::uint64_t{1});
  params.section_target = entry.value("sections", kDefaultFacesPerSection);

  std::array<std::vector<double>, kPhaseCount> phase;
  std::vector<double> totals;
  int segments = 0, particles = 0, removed = 0;
  for (int r = 0; r < repeats; ++r) {
    const TearRun run = run_tear(mesh, traj, params);
    segments = static_cast<int>(run.report.segments.size());
    particles = run.report.particles;
    removed = 0;
    for (const SegmentTiming& s : run.report.segments) removed += s.removed_faces;
    if (segments == 0) continue;
    std::array<double, kPhaseCount> mean{};
    double total = 0.0;
    for (const SegmentTiming& s : run.report.segments) {
      for (int p = 0; p < kPhaseCount; ++p) mean[p] += s.ms[p] / segments;
      total += s.total_ms / segments;
    }
    for (int p = 0; p < kPhaseCount; ++p) phase[p].push_back(mean[p]);
    totals.push_back(total);
  }
  const TearReference& ref = pick_reference(kTearReferences, entry, mesh.live_face_count());
  json phases;
  for (int p = 0; p < kPhaseCount; ++p) {
    phases[kPhaseNames[p]] = stats(phase[p]);
    phases[kPhaseNames[p]]["paper_ms"] = ref.phase_ms[p];
  }
  const double budget = kBudgetFactor * ref.total_ms;
  return {{"name", entry.value("name", std::string("tear"))},
          {"size_class", ref.size_class},
          {"vertices", mesh.vertex_count()},
          {"faces", mesh.live_face_count()},
          {"paper_vertices", ref.vertices},
          {"paper_faces", ref.faces},
          {"particles", particles},
          {"segments", segments},
          {"width", params.width},
          {"removed_faces_per_segment", segments ? double(removed) / segments : 0.0},
          {"repeats", repeats},
          {"phases", phases},
          {"total_ms", stats(totals)},
          {"paper_total_ms", ref.total_ms},
          {"budget_ms", budget},
          {"pass", !totals.empty() && median(totals) <= budget}};
}

json bench_cut(const json& entry, const TriMesh& mesh, int repeats) {
  Planed plane = Planed::through(mesh.bounds().center(), Vec3d::UnitX());
  if (entry.contains("plane")) {
    plane = plane_from_coefficients(entry.at("plane").get<std::vector<double>>());
  }
  std::vector<double> times;
  int points = 0;
  for (int r = 0; r < repeats; ++r) {
    const CutRun run = run_cut(mesh, plane);
    times.push_back(run.ms);
    points = run.result.intersection_points;
  }
  const CutReference& ref = pick_reference(kCutReferences, entry, mesh.live_face_count());
  const double budget = kBudgetFactor * ref.ms;
  return {{"name", entry.value("name", std::string("cut"))},
          {"size_class", ref.size_class},
          {"vertices", mesh.vertex_count()},
          {"faces", mesh.live_face_count()},
          {"paper_faces", ref.faces},
          {"intersection_points", points},
          {"paper_intersection_points", ref.intersection_points},
          {"repeats", repeats},
          {"ms", stats(times)},
          {"paper_ms", ref.ms},
          {"budget_ms", budget},
          {"pass", !times.empty() && median(times) <= budget}};
}

}  // namespace

json run_bench(const json& manifest, int repeats, const std::string& base_dir) {
  json out = {{"tear", json::array()},
              {"cut", json::array()},
              {"budget_factor", kBudgetFactor},
              {"footnotes",
               {"reference timings: Windows 11, AMD Ryzen 7 5800H, single-threaded",
                "update_mesh here is delta finalization plus the vertex buffer refresh, not a GPU upload",
                "meshes are size-matched stand-ins, not the reference models"}}};
  if (!manifest.is_object()) throw Error(ErrorKind::Parse, "bench manifest must be a JSON object");
  if (repeats <= 0) repeats = manifest.value("repeats", 5);
  try {
    for (const json& entry : manifest.value("cases", json::array())) {
      const std::string mode = entry.value("mode", std::string("tear"));
      const LoadedMesh loaded = load_mesh_source(entry.at("mesh").get<std::string>(), base_dir);
      if (mode == "tear")
        out["tear"].push_back(bench_tear(entry, loaded.mesh, repeats, base_dir));
      else if (mode == "cut")
        out["cut"].push_back(bench_cut(entry, loaded.mesh, repeats));
      else
        throw Error(ErrorKind::Parse, "unknown bench mode " + mode);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bench manifest: ") + e.what());
  }
  return out;
}

}  // namespace softcut
