#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace oedflow {

/// Triangulation of the unit disk built from concentric rings.
///
/// Ring k (k = 1..K) has radius k/K and about n_boundary * k / K equally
/// spaced nodes, so arc spacing is roughly uniform; the outer ring carries
/// exactly n_boundary nodes with boundary node b at angle 2*pi*b/n_boundary.
/// Neighbouring rings are stitched by walking both in angle order.
struct DiskMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<int> boundary_nodes;            // ordered by angle
  std::vector<int> boundary_index;            // node -> boundary slot, or -1

  /// `n_rings` <= 0 picks K = round(n_boundary / (2 pi)) so radial and arc
  /// spacing match. Throws MeshError for fewer than 8 boundary nodes or a
  /// degenerate element.
  static DiskMesh build(int n_boundary, int n_rings = 0);

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_boundary() const { return static_cast<int>(boundary_nodes.size()); }
  double area(int tri) const;
  /// Index of a triangle containing p (first match in index order), or -1.
  int locate(const Eigen::Vector2d& p) const;
  /// Barycentric coordinates of p with respect to triangle `tri`.
  Eigen::Vector3d barycentric(int tri, const Eigen::Vector2d& p) const;
};

}  // namespace oedflow
