#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oedflow/core.hpp"
#include "oedflow/problems/disk_mesh.hpp"

namespace oedflow {

/// Conductivity sigma(y1, y2) on the unit disk.
struct EitMedia {
  std::string name;
  std::function<double(double, double)> sigma;

  /// sigma == c
  static EitMedia homogeneous(double c = 1.0);
  /// sigma = 7 + 50 exp(-|y - (1/3, 1/3)|^2 / (2 * 0.1^2))
  static EitMedia inhomogeneous();
};

/// Piecewise-linear solution of div(sigma grad u) = 0 with Dirichlet data.
struct EitSolution {
  Eigen::VectorXd u;                       // nodal values
  std::vector<Eigen::Vector2d> gradients;  // constant per element
  double residual = 0.0;                   // max |K u - f| over interior rows

  /// Gradient of the element containing p (see DiskMesh::locate).
  Eigen::Vector2d gradient_at(const DiskMesh& mesh, const Eigen::Vector2d& p) const;
};

/// Assembles and factors the P1 stiffness matrix once (sigma taken at
/// element centroids) so that many boundary data sets can be solved.
class EitSolver {
 public:
  /// Throws NonPositiveMedia if sigma <= 0 at any centroid.
  EitSolver(const DiskMesh& mesh, const EitMedia& media);

  /// `boundary_data[b]` is the value at mesh.boundary_nodes[b].
  EitSolution solve(std::span<const double> boundary_data) const;

 private:
  const DiskMesh& mesh_;
  std::vector<int> interior_index_;  // node -> interior unknown, or -1
  Eigen::SparseMatrix<double> k_ii_;
  Eigen::SparseMatrix<double> k_ib_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> cholesky_;
};

EitSolution eit_solve(const DiskMesh& mesh, const EitMedia& media,
                      std::span<const double> boundary_data);

struct EitOptions {
  int n_boundary = 200;
  int n_eval = 20;
  int n_rings = 0;  // 0 = match radial to boundary spacing
};

/// Linearized EIT on the unit disk, designs (theta1, theta2) in [0, 2pi)^2.
///
/// For every boundary node the forward problem with a single-node indicator
/// is solved once at construction. The indicator carries unit boundary mass
/// (nodal value 1/h for node spacing h), so fields approach the Poisson
/// kernel as the mesh is refined. A boundary angle between nodes uses the
/// linear interpolation of the two bracketing nodal solutions; row entry j
/// is grad u(theta1, y_j) . grad v(theta2, y_j) at the interior evaluation
/// points y_j (two rings at radii 0.3 and 0.6 holding 40% / 60% of them).
/// The Jacobian is the forward difference of the bracketing nodal
/// solutions over the node spacing 2pi/n_boundary, which is also the exact
/// derivative of the interpolant inside each node interval.
class EitModel final : public ExperimentModel {
 public:
  explicit EitModel(EitMedia media, EitOptions options = {});

  std::string name() const override { return "eit_" + media_.name; }
  int row_dim() const override { return static_cast<int>(eval_points_.size()); }
  const DesignDomain& domain() const override { return domain_; }
  Eigen::VectorXd row(const DesignPoint& theta) const override;
  Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const override;

  const DiskMesh& mesh() const { return *mesh_; }
  const EitMedia& media() const { return media_; }
  int n_boundary() const { return mesh_->n_boundary(); }
  double node_spacing() const;
  const std::vector<Eigen::Vector2d>& eval_points() const { return eval_points_; }
  const std::vector<int>& eval_elements() const { return eval_elements_; }
  /// Solution for the unit-valued indicator at boundary node b.
  const EitSolution& nodal_solution(int b) const { return solutions_[b]; }

 private:
  struct Bracket {
    int left;
    int right;
    double t;
  };
  Bracket locate(double angle) const;
  /// Gradients at the evaluation points for a boundary angle (d x 2).
  Eigen::MatrixX2d interpolated_gradients(const Bracket& b) const;

  EitMedia media_;
  std::unique_ptr<DiskMesh> mesh_;
  DesignDomain domain_;
  std::vector<Eigen::Vector2d> eval_points_;
  std::vector<int> eval_elements_;
  std::vector<EitSolution> solutions_;
  std::vector<Eigen::MatrixX2d> eval_gradients_;  // per boundary node, d x 2, unit mass
};

/// The default evaluation layout: round(0.4 d) points at radius 0.3 and the
/// rest at radius 0.6, each ring equally spaced with a half-spacing offset.
std::vector<Eigen::Vector2d> default_eval_points(int d);

}  // namespace oedflow
