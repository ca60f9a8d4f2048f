#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "softcut/mesh.hpp"
#include "softcut/tear_box.hpp"

namespace softcut::test {

inline Vec3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3d v(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-6) v = Vec3d(g(rng), g(rng), g(rng));
  return v.normalized();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Stroke over a sphere-like mesh centered at the origin: the tip runs
/// `inset` below the surface along a gently bending arc, the blade sticks out.
inline std::vector<ScalpelSample> random_sphere_stroke(std::mt19937_64& rng, int segments, double radius = 1.0,
                                                       double step = 0.25, double inset = 0.12) {
  Vec3d dir = random_unit(rng);
  Vec3d heading = random_unit(rng);
  heading = (heading - heading.dot(dir) * dir).normalized();
  std::vector<ScalpelSample> out;
  for (int k = 0; k <= segments; ++k) {
    ScalpelSample s;
    s.t_ms = 11.0 * k;
    s.tip = (radius - inset) * dir;
    s.end = (radius + 0.6) * dir;
    out.push_back(s);
    // Advance along the surface, turning by up to ~35 degrees per step.
    const Vec3d side = dir.cross(heading);
    const double turn = uniform(rng, -0.6, 0.6);
    heading = (std::cos(turn) * heading + std::sin(turn) * side).normalized();
    dir = (dir + step * heading).normalized();
    heading = (heading - heading.dot(dir) * dir).normalized();
  }
  return out;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace softcut::test
