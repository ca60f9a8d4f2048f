#include "softcut/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace softcut {

void finish_mesh(TriMesh& mesh) {
  mesh.face_alive.assign(mesh.faces.size(), 1);
  mesh.uvs.resize(mesh.positions.size(), Vec2d::Zero());
  recompute_vertex_normals(mesh);
  mesh.refresh_tolerance_scale();
}

TriMesh make_icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  for (const Vec3d& p : {Vec3d(-1, t, 0), Vec3d(1, t, 0), Vec3d(-1, -t, 0), Vec3d(1, -t, 0), Vec3d(0, -1, t),
                         Vec3d(0, 1, t), Vec3d(0, -1, -t), Vec3d(0, 1, -t), Vec3d(t, 0, -1), Vec3d(t, 0, 1),
                         Vec3d(-t, 0, -1), Vec3d(-t, 0, 1)})
    m.positions.push_back(p.normalized());
  m.faces = {Face(0, 11, 5), Face(0, 5, 1),  Face(0, 1, 7),   Face(0, 7, 10), Face(0, 10, 11),
             Face(1, 5, 9),  Face(5, 11, 4), Face(11, 10, 2), Face(10, 7, 6), Face(7, 1, 8),
             Face(3, 9, 4),  Face(3, 4, 2),  Face(3, 2, 6),   Face(3, 6, 8),  Face(3, 8, 9),
             Face(4, 9, 5),  Face(2, 4, 11), Face(6, 2, 10),  Face(8, 6, 7),  Face(9, 8, 1)};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      m.positions.push_back((0.5 * (m.positions[a] + m.positions[b])).normalized());
      const int id = static_cast<int>(m.positions.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(m.faces.size() * 4);
    for (const Face& f : m.faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.emplace_back(f[0], a, c);
      next.emplace_back(f[1], b, a);
      next.emplace_back(f[2], c, b);
      next.emplace_back(a, b, c);
    }
    m.faces = std::move(next);
  }
  finish_mesh(m);
  return m;
}

TriMesh make_cube(double edge) {
  const double h = 0.5 * edge;
  TriMesh m;
  for (int i = 0; i < 8; ++i) m.positions.emplace_back(i & 1 ? h : -h, i & 2 ? h : -h, i & 4 ? h : -h);
  m.faces = {Face(0, 2, 1), Face(1, 2, 3), Face(4, 5, 6), Face(5, 7, 6),   // z = -h, z = +h
             Face(0, 1, 4), Face(1, 5, 4), Face(2, 6, 3), Face(3, 6, 7),   // y = -h, y = +h
             Face(0, 4, 2), Face(2, 4, 6), Face(1, 3, 5), Face(3, 7, 5)};  // x = -h, x = +h
  finish_mesh(m);
  return m;
}

TriMesh make_grid(int nx, int ny, double size) {
  TriMesh m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      m.positions.emplace_back(size * i / nx, size * j / ny, 0.0);
      m.uvs.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
    }
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.faces.emplace_back(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      m.faces.emplace_back(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  finish_mesh(m);
  return m;
}

TriMesh make_ellipsoid(int vertex_count, const Vec3d& radii) {
  using std::numbers::pi;
  const int ring_budget = std::max(vertex_count - 2, 3);
  const double spacing = std::sqrt(4.0 * pi / ring_budget);
  const int rings = std::max(1, static_cast<int>(std::lround(pi / spacing)) - 1);

  std::vector<int> count(rings);
  int total = 0;
  for (int i = 0; i < rings; ++i) {
    const double theta = pi * (i + 1) / (rings + 1);
    count[i] = std::max(3, static_cast<int>(std::lround(2.0 * pi * std::sin(theta) / spacing)));
    total += count[i];
  }
  // Spread the rounding difference over the rings nearest the equator.
  for (int k = 0; total != ring_budget; ++k) {
    const int i = rings / 2 + ((k % 2) ? (k + 1) / 2 : -(k / 2)) % std::max(1, rings / 2);
    const int step = total < ring_budget ? 1 : -1;
    if (count[i] + step >= 3) {
      count[i] += step;
      total += step;
    }
  }

  TriMesh m;
  auto place = [&](double theta, double phi) {
    return Vec3d(radii.x() * std::sin(theta) * std::cos(phi), radii.y() * std::sin(theta) * std::sin(phi),
                 radii.z() * std::cos(theta));
  };
  m.positions.push_back(place(0.0, 0.0));
  std::vector<int> first(rings);
  std::vector<double> phase(rings);
  for (int i = 0; i < rings; ++i) {
    const double theta = pi * (i + 1) / (rings + 1);
    first[i] = static_cast<int>(m.positions.size());
    phase[i] = (i % 2) ? 0.5 : 0.0;
    for (int j = 0; j < count[i]; ++j) m.positions.push_back(place(theta, 2.0 * pi * (j + phase[i]) / count[i]));
  }
  m.positions.push_back(place(pi, 0.0));
  const int south = static_cast<int>(m.positions.size()) - 1;

  for (int j = 0; j < count[0]; ++j) m.faces.emplace_back(0, first[0] + j, first[0] + (j + 1) % count[0]);
  for (int i = 0; i + 1 < rings; ++i) {
    const int na = count[i], nb = count[i + 1];
    auto a_id = [&](int k) { return first[i] + k % na; };
    auto b_id = [&](int k) { return first[i + 1] + k % nb; };
    int ia = 0, ib = 0;
    while (ia < na || ib < nb) {
      const double next_a = (ia + 1 + phase[i]) / na;
      const double next_b = (ib + 1 + phase[i + 1]) / nb;
      if (ib >= nb || (ia < na && next_a <= next_b)) {
        m.faces.emplace_back(a_id(ia), b_id(ib), a_id(ia + 1));
        ++ia;
      } else {
        m.faces.emplace_back(a_id(ia), b_id(ib), b_id(ib + 1));
        ++ib;
      }
    }
  }
  const int last = rings - 1;
  for (int j = 0; j < count[last]; ++j)
    m.faces.emplace_back(south, first[last] + (j + 1) % count[last], first[last] + j);
  finish_mesh(m);
  return m;
}

}  // namespace softcut
