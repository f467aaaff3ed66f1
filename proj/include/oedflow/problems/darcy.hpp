#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oedflow/core.hpp"

namespace oedflow {

/// Conductivity profile sigma(y) on [0, 1].
struct DarcyMedia {
  std::string name;
  std::function<double(double)> sigma;

  /// sigma(y) = 1 + 1000 exp(-1000 (y - 0.25)^2)
  static DarcyMedia bump();
  static DarcyMedia constant(double c);
};

/// Discrete solution of -(sigma u')' = delta_s, u(0) = u(1) = 0, on a
/// uniform grid with n cells.
struct DarcySolution {
  double dy = 0.0;
  std::vector<double> u;   // nodal values at y_i = i * dy, i = 0..n
  std::vector<double> du;  // cell slopes (u_{i+1} - u_i) / dy, i = 0..n-1
};

/// Thomas algorithm for a tridiagonal system. `lower[0]` and
/// `upper[n-1]` are ignored.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs);

/// Conservative finite differences: face conductivities are harmonic means
/// of nodal sigma and the unit point load is split onto the two bracketing
/// nodes with hat-function weights. Throws NonPositiveMedia if sigma <= 0 at
/// any node.
DarcySolution darcy_solve(const DarcyMedia& media, double source, int n_cells = 100);

/// Linearized 1D Darcy experiment on the design square [0,1]^2 (clamped).
/// A design (s1, s2) places the forward source at s1 and the adjoint source
/// at s2; row entry j integrates u'_{s1} v'_{s2} over the j-th block of
/// n_cells / n_params grid cells (piecewise constant sigma parameters).
///
/// Solutions for sources at grid nodes are cached, and a source at x
/// between nodes has the hat-weighted profile S(x) of its two bracketing
/// nodal solutions (equal to darcy_solve() by linearity). Each source is a
/// unit load smoothed over one grid cell: its slopes are the average of S
/// over [s - dy/2, s + dy/2]. Rows are then continuously differentiable in
/// the design and the Jacobian is exactly the central difference
/// (S(s + dy/2) - S(s - dy/2)) / dy.
class DarcyModel final : public ExperimentModel {
 public:
  explicit DarcyModel(DarcyMedia media, int n_cells = 100, int n_params = 20);

  std::string name() const override { return "darcy_" + media_.name; }
  int row_dim() const override { return n_params_; }
  const DesignDomain& domain() const override { return domain_; }
  Eigen::VectorXd row(const DesignPoint& theta) const override;
  Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const override;

  int n_cells() const { return n_cells_; }
  double dy() const { return 1.0 / n_cells_; }
  const DarcyMedia& media() const { return media_; }
  /// Cell slopes for the smoothed source at s.
  Eigen::VectorXd source_slopes(double s) const;
  /// d/ds of source_slopes(s).
  Eigen::VectorXd source_slopes_derivative(double s) const;
  /// Cell slopes for a point source at x (hat-weighted nodal solutions).
  Eigen::VectorXd nodal_profile(double x) const;

 private:
  Eigen::VectorXd block_integrals(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;

  DarcyMedia media_;
  int n_cells_;
  int n_params_;
  DesignDomain domain_;
  Eigen::MatrixXd nodal_slopes_;  // (n_cells + 1) x n_cells
};

}  // namespace oedflow
