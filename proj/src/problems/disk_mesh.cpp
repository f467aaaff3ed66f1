#include "oedflow/problems/disk_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oedflow/errors.hpp"

namespace oedflow {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

struct Ring {
  std::vector<int> ids;
  std::vector<double> angles;  // increasing, in [0, 2 pi)
};

Ring make_ring(DiskMesh& mesh, double radius, int count, double phase) {
  Ring ring;
  for (int i = 0; i < count; ++i) {
    const double a = 2.0 * std::numbers::pi * (i + phase) / count;
    ring.ids.push_back(mesh.n_nodes());
    ring.angles.push_back(a);
    mesh.nodes.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return ring;
}

void add_triangle(DiskMesh& mesh, int a, int b, int c) {
  double area = signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
  if (area < 0.0) {
    std::swap(b, c);
    area = -area;
  }
  if (!(area > 1e-14)) {
    std::ostringstream msg;
    msg << "degenerate triangle (" << a << ", " << b << ", " << c << ")";
    throw MeshError(msg.str());
  }
  mesh.triangles.push_back({a, b, c});
}

// Stitches two neighbouring rings by always advancing the ring whose next
// node comes first in angle.
void stitch(DiskMesh& mesh, const Ring& inner, const Ring& outer) {
  const int na = static_cast<int>(inner.ids.size());
  const int nb = static_cast<int>(outer.ids.size());
  const auto angle = [](const Ring& r, int i) {
    const int n = static_cast<int>(r.ids.size());
    return r.angles[i % n] + 2.0 * std::numbers::pi * (i / n);
  };
  int i = 0;
  int j = 0;
  while (i < na || j < nb) {
    const bool advance_inner = j == nb || (i < na && angle(inner, i + 1) < angle(outer, j + 1));
    if (advance_inner) {
      add_triangle(mesh, inner.ids[i % na], outer.ids[j % nb], inner.ids[(i + 1) % na]);
      ++i;
    } else {
      add_triangle(mesh, inner.ids[i % na], outer.ids[j % nb], outer.ids[(j + 1) % nb]);
      ++j;
    }
  }
}

}  // namespace

DiskMesh DiskMesh::build(int n_boundary, int n_rings) {
  if (n_boundary < 8) throw MeshError("disk mesh needs at least 8 boundary nodes");
  const int rings =
      n_rings > 0 ? n_rings
                  : std::max(2, static_cast<int>(std::lround(n_boundary / (2.0 * std::numbers::pi))));

  DiskMesh mesh;
  mesh.nodes.emplace_back(0.0, 0.0);

  Ring previous;
  for (int k = 1; k <= rings; ++k) {
    const int count = k == rings ? n_boundary
                                 : std::max(6, static_cast<int>(std::lround(
                                                   static_cast<double>(n_boundary) * k / rings)));
    // Odd rings are rotated by half a spacing to avoid long radial spokes.
    const double phase = (k == rings || k % 2 == 0) ? 0.0 : 0.5;
    Ring ring = make_ring(mesh, static_cast<double>(k) / rings, count, phase);
    if (k == 1) {
      for (int i = 0; i < count; ++i) add_triangle(mesh, 0, ring.ids[i], ring.ids[(i + 1) % count]);
    } else {
      stitch(mesh, previous, ring);
    }
    if (k == rings) mesh.boundary_nodes = ring.ids;
    previous = std::move(ring);
  }

  mesh.boundary_index.assign(mesh.n_nodes(), -1);
  for (int b = 0; b < mesh.n_boundary(); ++b) mesh.boundary_index[mesh.boundary_nodes[b]] = b;
  return mesh;
}

double DiskMesh::area(int tri) const {
  const auto& t = triangles[tri];
  return signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

Eigen::Vector3d DiskMesh::barycentric(int tri, const Eigen::Vector2d& p) const {
  const auto& t = triangles[tri];
  const double total = area(tri);
  return {signed_area(p, nodes[t[1]], nodes[t[2]]) / total,
          signed_area(nodes[t[0]], p, nodes[t[2]]) / total,
          signed_area(nodes[t[0]], nodes[t[1]], p) / total};
}

int DiskMesh::locate(const Eigen::Vector2d& p) const {
  for (int e = 0; e < static_cast<int>(triangles.size()); ++e) {
    if (barycentric(e, p).minCoeff() >= -1e-12) return e;
  }
  return -1;
}

}  // namespace oedflow
