#include "oedflow/problems/darcy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oedflow {

DarcyMedia DarcyMedia::bump() {
  return {"bump", [](double y) { return 1.0 + 1000.0 * std::exp(-1000.0 * (y - 0.25) * (y - 0.25)); }};
}

DarcyMedia DarcyMedia::constant(double c) {
  std::ostringstream name;
  name << "const" << c;
  return {name.str(), [c](double) { return c; }};
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  std::vector<double> c(n, 0.0);
  double pivot = diag[0];
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (i + 1 < n) c[i] = upper[i] / pivot;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

namespace {

struct DarcyOperator {
  int n;
  double dy;
  std::vector<double> lower, diag, upper;  // interior nodes 1..n-1

  DarcyOperator(const DarcyMedia& media, int n_cells) : n(n_cells), dy(1.0 / n_cells) {
    if (n_cells < 2) throw Error("darcy: need at least two grid cells");
    std::vector<double> sigma(n + 1);
    for (int i = 0; i <= n; ++i) {
      sigma[i] = media.sigma(i * dy);
      if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
        std::ostringstream msg;
        msg << "darcy: conductivity " << sigma[i] << " at y = " << i * dy << " is not positive";
        throw NonPositiveMedia(msg.str());
      }
    }
    std::vector<double> face(n);
    for (int f = 0; f < n; ++f) face[f] = 2.0 * sigma[f] * sigma[f + 1] / (sigma[f] + sigma[f + 1]);

    const int m = n - 1;
    lower.assign(m, 0.0);
    diag.assign(m, 0.0);
    upper.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      const int node = r + 1;
      diag[r] = (face[node - 1] + face[node]) / dy;
      lower[r] = -face[node - 1] / dy;
      upper[r] = -face[node] / dy;
    }
  }

  /// Nodal solution for unit loads `load` at nodes 0..n (boundary loads drop).
  DarcySolution solve(const std::vector<double>& load) const {
    std::vector<double> rhs(load.begin() + 1, load.end() - 1);
    const auto interior = solve_tridiagonal(lower, diag, upper, std::move(rhs));
    DarcySolution sol;
    sol.dy = dy;
    sol.u.assign(n + 1, 0.0);
    std::copy(interior.begin(), interior.end(), sol.u.begin() + 1);
    sol.du.resize(n);
    for (int f = 0; f < n; ++f) sol.du[f] = (sol.u[f + 1] - sol.u[f]) / dy;
    return sol;
  }
};

void check_source(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << "darcy: source location " << s << " lies outside [0, 1]";
    throw Error(msg.str());
  }
}

}  // namespace

DarcySolution darcy_solve(const DarcyMedia& media, double source, int n_cells) {
  check_source(source);
  const DarcyOperator op(media, n_cells);
  std::vector<double> load(n_cells + 1, 0.0);
  const int cell = std::min(static_cast<int>(std::floor(source * n_cells)), n_cells - 1);
  const double t = source * n_cells - cell;
  load[cell] += 1.0 - t;
  load[cell + 1] += t;
  return op.solve(load);
}

DarcyModel::DarcyModel(DarcyMedia media, int n_cells, int n_params)
    : media_(std::move(media)),
      n_cells_(n_cells),
      n_params_(n_params),
      domain_(DesignDomain::box(2, 0.0, 1.0)) {
  if (n_params < 1 || n_cells % n_params != 0) {
    throw Error("darcy: n_cells must be a positive multiple of n_params");
  }
  const DarcyOperator op(media_, n_cells_);
  nodal_slopes_ = Eigen::MatrixXd::Zero(n_cells_ + 1, n_cells_);
  std::vector<double> load(n_cells_ + 1, 0.0);
  for (int node = 1; node < n_cells_; ++node) {
    load[node] = 1.0;
    const auto sol = op.solve(load);
    load[node] = 0.0;
    for (int f = 0; f < n_cells_; ++f) nodal_slopes_(node, f) = sol.du[f];
  }
}

Eigen::VectorXd DarcyModel::nodal_profile(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const int cell = std::min(static_cast<int>(std::floor(x * n_cells_)), n_cells_ - 1);
  const double t = x * n_cells_ - cell;
  return ((1.0 - t) * nodal_slopes_.row(cell) + t * nodal_slopes_.row(cell + 1)).transpose();
}

Eigen::VectorXd DarcyModel::source_slopes(double s) const {
  check_source(s);
  // Exact average of the piecewise-linear profile over [s - dy/2, s + dy/2],
  // split at grid nodes. The profile vanishes outside [0, 1].
  const double dy = 1.0 / n_cells_;
  const double a = std::max(0.0, s - 0.5 * dy);
  const double b = std::min(1.0, s + 0.5 * dy);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n_cells_);
  double x0 = a;
  while (x0 < b) {
    const double next_node = (std::floor(x0 * n_cells_ + 1e-12) + 1.0) * dy;
    const double x1 = std::min(b, next_node);
    if (x1 > x0) total += 0.5 * (x1 - x0) * (nodal_profile(x0) + nodal_profile(x1));
    x0 = x1;
  }
  return total / dy;
}

Eigen::VectorXd DarcyModel::source_slopes_derivative(double s) const {
  check_source(s);
  const double dy = 1.0 / n_cells_;
  const auto side = [&](double x) -> Eigen::VectorXd {
    if (x < 0.0 || x > 1.0) return Eigen::VectorXd::Zero(n_cells_);
    return nodal_profile(x);
  };
  return (side(s + 0.5 * dy) - side(s - 0.5 * dy)) / dy;
}

Eigen::VectorXd DarcyModel::block_integrals(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  const int width = n_cells_ / n_params_;
  const double dy = 1.0 / n_cells_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_params_);
  for (int j = 0; j < n_params_; ++j) {
    double s = 0.0;
    for (int c = j * width; c < (j + 1) * width; ++c) s += f[c] * g[c];
    out[j] = s * dy;
  }
  return out;
}

Eigen::VectorXd DarcyModel::row(const DesignPoint& theta) const {
  return block_integrals(source_slopes(theta[0]), source_slopes(theta[1]));
}

Eigen::MatrixXd DarcyModel::row_jacobian(const DesignPoint& theta) const {
  const Eigen::VectorXd u = source_slopes(theta[0]);
  const Eigen::VectorXd v = source_slopes(theta[1]);
  Eigen::MatrixXd jac(n_params_, 2);
  jac.col(0) = block_integrals(source_slopes_derivative(theta[0]), v);
  jac.col(1) = block_integrals(u, source_slopes_derivative(theta[1]));
  return jac;
}

}  // namespace oedflow
