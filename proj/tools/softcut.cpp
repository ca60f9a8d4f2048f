// softcut command-line front end: tear, cut, particles, bench, serve.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "softcut/harness.hpp"
#include "softcut/session.hpp"

using namespace softcut;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// "dir/bunny.obj" -> "dir/bunny"
std::string stem_path(const std::string& path) {
  fs::path p(path);
  if (p.extension() == ".obj") p.replace_extension();
  return p.string();
}

void write_mesh(const std::string& path, const TriMesh& mesh, const std::optional<Skeleton>& skeleton) {
  const SavedMesh saved = save_mesh(mesh, skeleton ? &*skeleton : nullptr);
  write_text_file(path, saved.obj);
  if (saved.sidecar) write_text_file(sidecar_path(path), *saved.sidecar);
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

void warn(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct TearArgs {
  std::string mesh, trajectory, out, report, delta_log, particles_out;
  double width = 0.0;
  std::uint64_t seed = 0;
  int sections = kDefaultFacesPerSection;
  bool parallel = false;
  bool no_particles = false;
  bool exhaustive = false;
};

int tear_command(const TearArgs& a) {
  const LoadedMesh loaded = load_mesh_source(a.mesh);
  warn(loaded.warnings);
  const Trajectory trajectory = parse_trajectory(read_text_file(a.trajectory));
  TearParams params;
  params.width = a.width;
  params.seed = a.seed;
  params.section_target = a.sections;
  params.parallel = a.parallel;
  params.particles = !a.no_particles;
  params.repair = a.exhaustive ? RepairMode::Exhaustive : RepairMode::Pruned;
  const TearRun run = run_tear(loaded.mesh, trajectory, params, loaded.skeleton ? &*loaded.skeleton : nullptr);
  warn(run.report.warnings);

  const std::string out = a.out.empty() ? stem_path(a.mesh) + ".torn.obj" : a.out;
  write_mesh(out, run.mesh, loaded.skeleton);
  if (!a.delta_log.empty()) write_text_file(a.delta_log, run.delta_log);
  if (!a.particles_out.empty() && run.particles) write_text_file(a.particles_out, particles_to_json(*run.particles));
  write_or_print(a.report, report_to_json(run.report).dump(2) + "\n");
  return 0;
}

struct CutArgs {
  std::string mesh, plane, trajectory, out_prefix, report;
};

int cut_command(const CutArgs& a) {
  const LoadedMesh loaded = load_mesh_source(a.mesh);
  warn(loaded.warnings);
  Planed plane;
  if (!a.plane.empty()) {
    std::vector<double> abcd;
    std::stringstream in(a.plane);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        abcd.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, "bad plane coefficient \"" + item + "\"");
      }
    }
    plane = plane_from_coefficients(abcd);
  } else {
    const Trajectory t = parse_trajectory(read_text_file(a.trajectory));
    if (t.mode != StrokeMode::Cut) throw Error(ErrorKind::Parse, "trajectory mode is not cut");
    plane = plane_from_trajectory(t);
  }
  const CutRun run = run_cut(loaded.mesh, plane);
  warn(run.warnings);
  const std::string prefix = a.out_prefix.empty() ? stem_path(a.mesh) : a.out_prefix;
  write_mesh(prefix + ".pos.obj", run.result.positive_mesh, loaded.skeleton);
  write_mesh(prefix + ".neg.obj", run.result.negative_mesh, loaded.skeleton);
  write_or_print(a.report, cut_report_to_json(run, plane).dump(2) + "\n");
  return 0;
}

struct ParticleArgs {
  std::string mesh, out;
  double radius = 0.0, delta = 0.0, poisson = 0.0;
  std::uint64_t seed = 0;
};

int particles_command(const ParticleArgs& a) {
  const LoadedMesh loaded = load_mesh_source(a.mesh);
  warn(loaded.warnings);
  ParticleParams p = default_particle_params(loaded.mesh, a.seed);
  if (a.poisson > 0) p.poisson_r = a.poisson;
  if (a.radius > 0) p.d = a.radius;
  if (a.delta > 0) p.delta = a.delta;
  const ParticleSystem system = generate_particles(loaded.mesh, p);
  write_or_print(a.out, particles_to_json(system));
  std::cerr << system.size() << " particles, " << system.map.neighbors.size() << " neighbor links\n";
  return 0;
}

struct BenchArgs {
  std::string manifest, out;
  int repeats = 0;
};

int bench_command(const BenchArgs& a) {
  json manifest;
  try {
    manifest = json::parse(read_text_file(a.manifest));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bench manifest: ") + e.what());
  }
  const json table = run_bench(manifest, a.repeats, fs::path(a.manifest).parent_path().string());
  write_or_print(a.out, table.dump(2) + "\n");
  for (const json& row : table["tear"])
    std::cerr << "tear " << row["name"].get<std::string>() << ": " << row["total_ms"]["median"].get<double>()
              << " ms/segment (budget " << row["budget_ms"].get<double>() << ") "
              << (row["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  for (const json& row : table["cut"])
    std::cerr << "cut " << row["name"].get<std::string>() << ": " << row["ms"]["median"].get<double>()
              << " ms (budget " << row["budget_ms"].get<double>() << ") "
              << (row["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  return 0;
}

struct ServeArgs {
  int port = 7341;
  std::string params, host = "127.0.0.1", base_dir = ".";
};

int serve_command(const ServeArgs& a) {
  json params = json::object();
  if (!a.params.empty()) {
    try {
      params = json::parse(read_text_file(a.params));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("params: ") + e.what());
    }
  }
  SessionServer server(params, a.port, a.host, a.base_dir);
  std::cout << "listening on " << a.host << ":" << server.port() << std::endl;
  server.serve();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tear, cut and deform triangle meshes"};
  app.require_subcommand(1);

  TearArgs tear;
  auto* t = app.add_subcommand("tear", "Play a tear trajectory over a mesh");
  t->add_option("--mesh", tear.mesh, "Input OBJ (or ellipsoid:N, icosphere:S, cube)")->required();
  t->add_option("--trajectory", tear.trajectory, "Trajectory JSON")->required()->check(CLI::ExistingFile);
  t->add_option("--width", tear.width, "Tear width (default: the trajectory's)");
  t->add_option("--seed", tear.seed, "Particle sampling seed");
  t->add_option("--out", tear.out, "Output OBJ (default <input>.torn.obj)");
  t->add_option("--report", tear.report, "Phase report JSON (default stdout)");
  t->add_option("--sections", tear.sections, "Target faces per mesh section")->check(CLI::PositiveNumber);
  t->add_flag("--parallel", tear.parallel, "Deform vertices on all cores");
  t->add_option("--delta-log", tear.delta_log, "Write the delta log (one JSON line per segment)");
  t->add_option("--particles-out", tear.particles_out, "Write the repaired particle map");
  t->add_flag("--no-particles", tear.no_particles, "Skip the particle system");
  t->add_flag("--exhaustive-repair", tear.exhaustive, "Test every particle during repair");

  CutArgs cutargs;
  auto* c = app.add_subcommand("cut", "Split a mesh by a plane");
  c->add_option("--mesh", cutargs.mesh, "Input OBJ")->required();
  auto* plane_opt = c->add_option("--plane", cutargs.plane, "Plane a,b,c,d with ax+by+cz+d=0");
  auto* traj_opt = c->add_option("--trajectory", cutargs.trajectory, "Cut trajectory JSON")->check(CLI::ExistingFile);
  plane_opt->excludes(traj_opt);
  c->add_option("--out-prefix", cutargs.out_prefix, "Writes P.pos.obj and P.neg.obj (default <input>)");
  c->add_option("--report", cutargs.report, "Cut report JSON (default stdout)");

  ParticleArgs part;
  auto* p = app.add_subcommand("particles", "Generate the particle map of a mesh");
  p->add_option("--mesh", part.mesh, "Input OBJ")->required();
  p->add_option("--radius", part.radius, "Influence radius d");
  p->add_option("--delta", part.delta, "Neighbor distance threshold");
  p->add_option("--poisson", part.poisson, "Minimum anchor spacing");
  p->add_option("--seed", part.seed, "Sampling seed");
  p->add_option("--out", part.out, "Output JSON (default stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time tear and cut cases against the reference table");
  b->add_option("--manifest", bench.manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  b->add_option("--repeats", bench.repeats, "Repeats per case (default: manifest, else 5)");
  b->add_option("--out", bench.out, "Output JSON (default stdout)");

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "Run the interactive session service");
  s->add_option("--port", serve.port, "TCP port (0 picks a free one)");
  s->add_option("--params", serve.params, "Session parameters JSON")->check(CLI::ExistingFile);
  s->add_option("--host", serve.host, "Listen address");
  s->add_option("--base-dir", serve.base_dir, "Directory LoadMesh sources are resolved in");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*c && !*plane_opt && !*traj_opt) {
    std::cerr << "cut: one of --plane or --trajectory is required\n";
    return 1;
  }

  try {
    if (*t) return tear_command(tear);
    if (*c) return cut_command(cutargs);
    if (*p) return particles_command(part);
    if (*b) return bench_command(bench);
    if (*s) return serve_command(serve);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
