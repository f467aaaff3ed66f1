#include "oedflow/problems/eit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oedflow/parallel.hpp"

namespace oedflow {

EitMedia EitMedia::homogeneous(double c) {
  if (!(c > 0.0)) throw NonPositiveMedia("homogeneous conductivity must be positive");
  return {"homogeneous", [c](double, double) { return c; }};
}

EitMedia EitMedia::inhomogeneous() {
  return {"inhomogeneous", [](double y1, double y2) {
            const double r2 = (y1 - 1.0 / 3.0) * (y1 - 1.0 / 3.0) + (y2 - 1.0 / 3.0) * (y2 - 1.0 / 3.0);
            return 7.0 + 50.0 * std::exp(-r2 / (2.0 * 0.1 * 0.1));
          }};
}

Eigen::Vector2d EitSolution::gradient_at(const DiskMesh& mesh, const Eigen::Vector2d& p) const {
  const int e = mesh.locate(p);
  if (e < 0) throw MeshError("point lies outside the mesh");
  return gradients[e];
}

namespace {

// Gradients of the three barycentric coordinates of a triangle.
std::array<Eigen::Vector2d, 3> shape_gradients(const DiskMesh& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  const double twice_area = 2.0 * mesh.area(tri);
  std::array<Eigen::Vector2d, 3> g;
  for (int i = 0; i < 3; ++i) {
    const auto& a = mesh.nodes[t[(i + 1) % 3]];
    const auto& b = mesh.nodes[t[(i + 2) % 3]];
    g[i] = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / twice_area;
  }
  return g;
}

}  // namespace

EitSolver::EitSolver(const DiskMesh& mesh, const EitMedia& media) : mesh_(mesh) {
  const int n = mesh.n_nodes();
  interior_index_.assign(n, -1);
  int n_interior = 0;
  for (int v = 0; v < n; ++v) {
    if (mesh.boundary_index[v] < 0) interior_index_[v] = n_interior++;
  }

  std::vector<Eigen::Triplet<double>> ii;
  std::vector<Eigen::Triplet<double>> ib;
  for (int e = 0; e < static_cast<int>(mesh.triangles.size()); ++e) {
    const auto& t = mesh.triangles[e];
    const Eigen::Vector2d centroid = (mesh.nodes[t[0]] + mesh.nodes[t[1]] + mesh.nodes[t[2]]) / 3.0;
    const double sigma = media.sigma(centroid.x(), centroid.y());
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      std::ostringstream msg;
      msg << "eit: conductivity " << sigma << " at element " << e << " is not positive";
      throw NonPositiveMedia(msg.str());
    }
    const double area = mesh.area(e);
    if (!(area > 0.0)) throw MeshError("eit: degenerate element");
    const auto g = shape_gradients(mesh, e);
    for (int a = 0; a < 3; ++a) {
      const int row = interior_index_[t[a]];
      if (row < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const double k = sigma * area * g[a].dot(g[b]);
        const int col = interior_index_[t[b]];
        if (col >= 0) {
          ii.emplace_back(row, col, k);
        } else {
          ib.emplace_back(row, mesh.boundary_index[t[b]], k);
        }
      }
    }
  }
  k_ii_.resize(n_interior, n_interior);
  k_ii_.setFromTriplets(ii.begin(), ii.end());
  k_ib_.resize(n_interior, mesh.n_boundary());
  k_ib_.setFromTriplets(ib.begin(), ib.end());
  cholesky_.compute(k_ii_);
  if (cholesky_.info() != Eigen::Success) throw MeshError("eit: stiffness matrix is not SPD");
}

EitSolution EitSolver::solve(std::span<const double> boundary_data) const {
  if (static_cast<int>(boundary_data.size()) != mesh_.n_boundary()) {
    throw SizeMismatch("eit: boundary data must have one value per boundary node");
  }
  const Eigen::Map<const Eigen::VectorXd> g(boundary_data.data(),
                                            static_cast<Eigen::Index>(boundary_data.size()));
  const Eigen::VectorXd rhs = -(k_ib_ * g);
  const Eigen::VectorXd interior = cholesky_.solve(rhs);

  EitSolution sol;
  sol.residual = (k_ii_ * interior - rhs).lpNorm<Eigen::Infinity>();
  sol.u.resize(mesh_.n_nodes());
  for (int v = 0; v < mesh_.n_nodes(); ++v) {
    const int b = mesh_.boundary_index[v];
    sol.u[v] = b >= 0 ? g[b] : interior[interior_index_[v]];
  }
  sol.gradients.resize(mesh_.triangles.size());
  for (int e = 0; e < static_cast<int>(mesh_.triangles.size()); ++e) {
    const auto& t = mesh_.triangles[e];
    const auto grads = shape_gradients(mesh_, e);
    sol.gradients[e] = sol.u[t[0]] * grads[0] + sol.u[t[1]] * grads[1] + sol.u[t[2]] * grads[2];
  }
  return sol;
}

EitSolution eit_solve(const DiskMesh& mesh, const EitMedia& media,
                      std::span<const double> boundary_data) {
  return EitSolver(mesh, media).solve(boundary_data);
}

std::vector<Eigen::Vector2d> default_eval_points(int d) {
  if (d < 2) throw Error("eit: need at least two evaluation points");
  const int inner = std::max(1, static_cast<int>(std::lround(0.4 * d)));
  const int outer = d - inner;
  std::vector<Eigen::Vector2d> points;
  const auto add_ring = [&](double radius, int count) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + 0.5) / count;
      points.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
  };
  add_ring(0.3, inner);
  add_ring(0.6, outer);
  return points;
}

EitModel::EitModel(EitMedia media, EitOptions options)
    : media_(std::move(media)),
      mesh_(std::make_unique<DiskMesh>(DiskMesh::build(options.n_boundary, options.n_rings))),
      domain_(DesignDomain::torus(2, 2.0 * std::numbers::pi)),
      eval_points_(default_eval_points(options.n_eval)) {
  for (const auto& p : eval_points_) {
    const int e = mesh_->locate(p);
    if (e < 0) throw MeshError("eit: evaluation point outside the mesh");
    eval_elements_.push_back(e);
  }

  const EitSolver solver(*mesh_, media_);
  const int nb = mesh_->n_boundary();
  solutions_.resize(nb);
  eval_gradients_.resize(nb);
  parallel_for(nb, [&](int b) {
    std::vector<double> indicator(nb, 0.0);
    indicator[b] = 1.0;
    solutions_[b] = solver.solve(indicator);
    Eigen::MatrixX2d g(row_dim(), 2);
    for (int j = 0; j < row_dim(); ++j) g.row(j) = solutions_[b].gradients[eval_elements_[j]].transpose();
    eval_gradients_[b] = g / node_spacing();
  });
}

double EitModel::node_spacing() const { return 2.0 * std::numbers::pi / mesh_->n_boundary(); }

EitModel::Bracket EitModel::locate(double angle) const {
  const int nb = mesh_->n_boundary();
  const double x = angle / node_spacing();
  const double base = std::floor(x);
  int left = static_cast<int>(base) % nb;
  if (left < 0) left += nb;
  return {left, (left + 1) % nb, x - base};
}

Eigen::MatrixX2d EitModel::interpolated_gradients(const Bracket& b) const {
  return (1.0 - b.t) * eval_gradients_[b.left] + b.t * eval_gradients_[b.right];
}

Eigen::VectorXd EitModel::row(const DesignPoint& theta) const {
  const Eigen::MatrixX2d gu = interpolated_gradients(locate(theta[0]));
  const Eigen::MatrixX2d gv = interpolated_gradients(locate(theta[1]));
  return (gu.array() * gv.array()).rowwise().sum();
}

Eigen::MatrixXd EitModel::row_jacobian(const DesignPoint& theta) const {
  const Bracket b1 = locate(theta[0]);
  const Bracket b2 = locate(theta[1]);
  const Eigen::MatrixX2d gu = interpolated_gradients(b1);
  const Eigen::MatrixX2d gv = interpolated_gradients(b2);
  const double h = node_spacing();
  const Eigen::MatrixX2d du = (eval_gradients_[b1.right] - eval_gradients_[b1.left]) / h;
  const Eigen::MatrixX2d dv = (eval_gradients_[b2.right] - eval_gradients_[b2.left]) / h;
  Eigen::MatrixXd jac(row_dim(), 2);
  jac.col(0) = (du.array() * gv.array()).rowwise().sum();
  jac.col(1) = (gu.array() * dv.array()).rowwise().sum();
  return jac;
}

}  // namespace oedflow
