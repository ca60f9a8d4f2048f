#include "softcut/obj_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace softcut {

namespace {

using nlohmann::json;

struct Corner {
  long v = 0;
  long vt = 0;  // 0 = absent
  long vn = 0;
};

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view tok, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) parse_error(line, "bad number '" + std::string(tok) + "'");
  return v;
}

long parse_index(std::string_view tok, int line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
    parse_error(line, "bad index '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Resolves a 1-based or negative OBJ index against `count` entries.
long resolve(long idx, std::size_t count, int line, const char* what) {
  const long n = static_cast<long>(count);
  const long r = idx > 0 ? idx - 1 : n + idx;
  if (r < 0 || r >= n) parse_error(line, std::string(what) + " index out of range");
  return r;
}

Corner parse_corner(std::string_view tok, int line) {
  Corner c;
  const std::size_t s1 = tok.find('/');
  if (s1 == std::string_view::npos) {
    c.v = parse_index(tok, line);
    return c;
  }
  c.v = parse_index(tok.substr(0, s1), line);
  const std::string_view rest = tok.substr(s1 + 1);
  const std::size_t s2 = rest.find('/');
  const std::string_view vt = rest.substr(0, s2);
  if (!vt.empty()) c.vt = parse_index(vt, line);
  if (s2 != std::string_view::npos) {
    const std::string_view vn = rest.substr(s2 + 1);
    if (!vn.empty()) c.vn = parse_index(vn, line);
  }
  return c;
}

Eigen::Matrix4d matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 16) throw Error(ErrorKind::Parse, "bind_matrix must have 16 numbers");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j.at(r * 4 + c).get<double>();
  return m;
}

json matrix_to_json(const Eigen::Matrix4d& m) {
  json out = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.push_back(m(r, c));
  return out;
}

void load_sidecar(LoadedMesh& out, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("sidecar: ") + e.what());
  }
  TriMesh& mesh = out.mesh;
  Skeleton skel;
  try {
    for (const json& b : doc.at("bones")) {
      Bone bone;
      bone.name = b.value("name", "");
      bone.parent = b.value("parent", -1);
      bone.bind = matrix_from_json(b.at("bind_matrix"));
      bone.pose = bone.bind;
      skel.bones.push_back(std::move(bone));
    }
    skel.validate();

    mesh.skin.assign(mesh.vertex_count(), {});
    std::vector<std::uint8_t> seen(mesh.vertex_count(), 0);
    for (const json& w : doc.at("weights")) {
      const int v = w.at("v").get<int>();
      if (v < 0 || v >= mesh.vertex_count()) throw Error(ErrorKind::Parse, "sidecar weight for unknown vertex " + std::to_string(v));
      SkinWeights list;
      for (const json& pair : w.at("bones")) {
        const int bone = pair.at(0).get<int>();
        if (bone < 0 || bone >= skel.size())
          throw Error(ErrorKind::InvalidWeights, "vertex " + std::to_string(v) + " references unknown bone " + std::to_string(bone));
        list.push_back({bone, pair.at(1).get<double>()});
      }
      mesh.skin[v] = std::move(list);
      seen[v] = 1;
    }
    for (VertexId v : live_vertices(mesh)) {
      const double sum = weight_sum(mesh.skin[v]);
      const double dev = std::abs(sum - 1.0);
      if (dev > 1e-1 || !seen[v])
        throw Error(ErrorKind::InvalidWeights, "skin weights of vertex " + std::to_string(v) + " sum to " + std::to_string(sum));
      if (dev > 1e-3) out.warnings.push_back("renormalized skin weights of vertex " + std::to_string(v));
    }
    for (auto& list : mesh.skin)
      if (!list.empty()) list = normalize_skin(std::move(list));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("sidecar: ") + e.what());
  }
  out.skeleton = std::move(skel);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

LoadedMesh load_mesh(std::string_view obj_text, std::optional<std::string_view> sidecar_text) {
  LoadedMesh out;
  std::vector<Vec3d> vs, vns;
  std::vector<Vec2d> vts;
  std::vector<std::pair<int, std::vector<Corner>>> polys;
  std::map<std::string, int> ignored;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= obj_text.size()) {
    std::size_t nl = obj_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = obj_text.size();
    std::string_view line = obj_text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string_view kw = tok[0];
    if (kw == "v") {
      if (tok.size() < 4) parse_error(line_no, "vertex needs 3 coordinates");
      vs.emplace_back(parse_number(tok[1], line_no), parse_number(tok[2], line_no), parse_number(tok[3], line_no));
    } else if (kw == "vn") {
      if (tok.size() < 4) parse_error(line_no, "normal needs 3 components");
      vns.emplace_back(parse_number(tok[1], line_no), parse_number(tok[2], line_no), parse_number(tok[3], line_no));
    } else if (kw == "vt") {
      if (tok.size() < 3) parse_error(line_no, "texture coordinate needs 2 components");
      vts.emplace_back(parse_number(tok[1], line_no), parse_number(tok[2], line_no));
    } else if (kw == "f") {
      if (tok.size() < 4) parse_error(line_no, "face needs at least 3 corners");
      std::vector<Corner> corners;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        Corner c = parse_corner(tok[i], line_no);
        c.v = resolve(c.v, vs.size(), line_no, "vertex");
        c.vt = c.vt ? resolve(c.vt, vts.size(), line_no, "texture") + 1 : 0;
        c.vn = c.vn ? resolve(c.vn, vns.size(), line_no, "normal") + 1 : 0;
        corners.push_back(c);
      }
      polys.emplace_back(line_no, std::move(corners));
    } else {
      ++ignored[std::string(kw)];
    }
  }
  for (const auto& [kw, n] : ignored)
    out.warnings.push_back("ignored " + std::to_string(n) + " '" + kw + "' directive(s)");

  TriMesh& mesh = out.mesh;
  mesh.positions = vs;
  mesh.normals.assign(vs.size(), Vec3d::Zero());
  mesh.uvs.assign(vs.size(), Vec2d::Zero());
  std::vector<std::uint8_t> has_normal(vs.size(), 0), has_uv(vs.size(), 0);

  Aabbd all;
  for (const Vec3d& p : vs) all.extend(p);
  mesh.tolerance_scale = all.diagonal() > 0.0 ? all.diagonal() : 1.0;

  int dropped = 0;
  for (const auto& [line, corners] : polys) {
    for (const Corner& c : corners) {
      if (c.vt && !has_uv[c.v]) {
        mesh.uvs[c.v] = vts[c.vt - 1];
        has_uv[c.v] = 1;
      }
      if (c.vn && !has_normal[c.v]) {
        const double len = vns[c.vn - 1].norm();
        if (len > 0.0) {
          mesh.normals[c.v] = vns[c.vn - 1] / len;
          has_normal[c.v] = 1;
        }
      }
    }
    for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
      const Face f(static_cast<int>(corners[0].v), static_cast<int>(corners[i].v), static_cast<int>(corners[i + 1].v));
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2] ||
          triangle_area(vs[f[0]], vs[f[1]], vs[f[2]]) <= mesh.eps_area()) {
        ++dropped;
        continue;
      }
      mesh.add_face(f);
    }
  }
  if (dropped) out.warnings.push_back("dropped " + std::to_string(dropped) + " degenerate face(s)");

  if (const auto bad = non_manifold_edges(mesh); !bad.empty())
    throw Error(ErrorKind::NonManifold, "edge (" + std::to_string(bad[0].first + 1) + ", " + std::to_string(bad[0].second + 1) +
                                            ") is shared by more than two faces");

  bool missing = false;
  for (VertexId v : live_vertices(mesh)) missing |= !has_normal[v];
  if (missing) {
    std::vector<Vec3d> given = mesh.normals;
    recompute_vertex_normals(mesh);
    for (std::size_t v = 0; v < given.size(); ++v)
      if (has_normal[v]) mesh.normals[v] = given[v];
  }
  for (std::size_t v = 0; v < vs.size(); ++v)
    if (mesh.normals[v].isZero()) mesh.normals[v] = Vec3d::UnitZ();

  if (sidecar_text) load_sidecar(out, *sidecar_text);
  return out;
}

SavedMesh save_mesh(const TriMesh& source, const Skeleton* skeleton) {
  const CompactMesh c = compact(source);
  const TriMesh& m = c.mesh;
  std::string s;
  s.reserve(static_cast<std::size_t>(m.vertex_count()) * 96 + static_cast<std::size_t>(m.face_count()) * 40);
  for (const Vec3d& p : m.positions)
    s += "v " + format_double(p.x()) + ' ' + format_double(p.y()) + ' ' + format_double(p.z()) + '\n';
  for (const Vec2d& uv : m.uvs) s += "vt " + format_double(uv.x()) + ' ' + format_double(uv.y()) + '\n';
  for (const Vec3d& n : m.normals)
    s += "vn " + format_double(n.x()) + ' ' + format_double(n.y()) + ' ' + format_double(n.z()) + '\n';
  for (const Face& f : m.faces) {
    s += 'f';
    for (int k = 0; k < 3; ++k) {
      const std::string i = std::to_string(f[k] + 1);
      s += ' ' + i + '/' + i + '/' + i;
    }
    s += '\n';
  }

  SavedMesh out;
  out.obj = std::move(s);
  if (m.has_skin()) {
    json doc;
    doc["bones"] = json::array();
    if (skeleton) {
      for (const Bone& b : skeleton->bones)
        doc["bones"].push_back({{"name", b.name}, {"parent", b.parent}, {"bind_matrix", matrix_to_json(b.bind)}});
    }
    doc["weights"] = json::array();
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
      json bones = json::array();
      for (const BoneWeight& bw : m.skin[v]) bones.push_back(json::array({bw.bone, bw.weight}));
      doc["weights"].push_back({{"v", v}, {"bones", std::move(bones)}});
    }
    out.sidecar = doc.dump(1);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace softcut
