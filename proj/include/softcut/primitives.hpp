#pragma once

#include "softcut/mesh.hpp"

namespace softcut {

/// Unit-radius icosphere; 20 * 4^subdivisions faces.
TriMesh make_icosphere(int subdivisions);

/// 12-triangle cube centered at the origin.
TriMesh make_cube(double edge = 1.0);

/// Flat nx-by-ny grid over [0, size]^2 in the z = 0 plane, two triangles per cell.
TriMesh make_grid(int nx, int ny, double size = 1.0);

/// Closed ellipsoid with exactly `vertex_count` vertices (and 2 * vertex_count - 4
/// faces): latitude rings whose lengths follow the local circumference,
/// zipped into near-equilateral strips. Used as a size-matched stand-in for
/// scanned models.
TriMesh make_ellipsoid(int vertex_count, const Vec3d& radii = Vec3d(1.0, 0.95, 0.78));

/// Finalizes a mesh assembled by hand: normals, uvs, tolerance scale.
void finish_mesh(TriMesh& mesh);

}  // namespace softcut
