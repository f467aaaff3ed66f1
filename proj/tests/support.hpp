#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "oedflow/core.hpp"

namespace oedflow::test {

/// Same row everywhere, so the Jacobian vanishes.
class ConstantRowModel final : public ExperimentModel {
 public:
  explicit ConstantRowModel(Eigen::VectorXd a, DesignDomain domain = DesignDomain::box(2, 0.0, 1.0))
      : a_(std::move(a)), domain_(std::move(domain)) {}

  std::string name() const override { return "constant"; }
  int row_dim() const override { return static_cast<int>(a_.size()); }
  const DesignDomain& domain() const override { return domain_; }
  Eigen::VectorXd row(const DesignPoint&) const override { return a_; }
  Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const override {
    return Eigen::MatrixXd::Zero(row_dim(), theta.size());
  }

 private:
  Eigen::VectorXd a_;
  DesignDomain domain_;
};

/// Model assembled from closures.
class LambdaModel final : public ExperimentModel {
 public:
  using RowFn = std::function<Eigen::VectorXd(const DesignPoint&)>;
  using JacFn = std::function<Eigen::MatrixXd(const DesignPoint&)>;

  LambdaModel(int d, DesignDomain domain, RowFn row, JacFn jac)
      : d_(d), domain_(std::move(domain)), row_(std::move(row)), jac_(std::move(jac)) {}

  std::string name() const override { return "lambda"; }
  int row_dim() const override { return d_; }
  const DesignDomain& domain() const override { return domain_; }
  Eigen::VectorXd row(const DesignPoint& theta) const override { return row_(theta); }
  Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const override { return jac_(theta); }

 private:
  int d_;
  DesignDomain domain_;
  RowFn row_;
  JacFn jac_;
};

/// Smooth analytic model on [0, 2pi)^2 with d = 5 rows built from
/// trigonometric features, linearly independent even on the diagonal
/// theta1 = theta2.
inline LambdaModel trig_model() {
  return LambdaModel(
      5, DesignDomain::torus(2, 2.0 * std::numbers::pi),
      [](const DesignPoint& t) {
        Eigen::VectorXd a(5);
        a << 1.0, std::cos(t[0]), std::sin(t[1]), std::cos(t[0] + t[1]), std::sin(2.0 * t[0] + t[1]);
        return a;
      },
      [](const DesignPoint& t) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(5, 2);
        j(1, 0) = -std::sin(t[0]);
        j(2, 1) = std::cos(t[1]);
        j(3, 0) = j(3, 1) = -std::sin(t[0] + t[1]);
        j(4, 0) = 2.0 * std::cos(2.0 * t[0] + t[1]);
        j(4, 1) = std::cos(2.0 * t[0] + t[1]);
        return j;
      });
}

/// Rows looked up by index: row(theta) = rows.row(round(theta[0])). Lets
/// tests feed explicit rows.
inline LambdaModel table_model(const Eigen::MatrixXd& rows) {
  const int m = static_cast<int>(rows.rows());
  return LambdaModel(
      static_cast<int>(rows.cols()), DesignDomain::box(1, 0.0, std::max(1, m - 1)),
      [rows](const DesignPoint& t) -> Eigen::VectorXd {
        return rows.row(static_cast<Eigen::Index>(std::lround(t[0]))).transpose();
      },
      [rows](const DesignPoint&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(rows.cols(), 1); });
}

/// Ensemble selecting rows 0..m-1 of a table_model.
inline ParticleEnsemble table_ensemble(int m) {
  Eigen::MatrixXd c(m, 1);
  for (int i = 0; i < m; ++i) c(i, 0) = i;
  return ParticleEnsemble(c);
}

/// n equally spaced angles starting at `phase`.
inline ParticleEnsemble equally_spaced_circle(int n, double phase = 0.0) {
  Eigen::MatrixXd c(n, 1);
  for (int i = 0; i < n; ++i) c(i, 0) = std::fmod(phase + 2.0 * std::numbers::pi * i / n, 2.0 * std::numbers::pi);
  return ParticleEnsemble(c);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

/// Random SPD matrix B B^T / k + shift I with moderate conditioning.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int d, double shift = 0.1) {
  const Eigen::MatrixXd b = random_matrix(rng, d, 2 * d);
  return b * b.transpose() / (2.0 * d) + shift * Eigen::MatrixXd::Identity(d, d);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int d) {
  const Eigen::MatrixXd b = random_matrix(rng, d, d);
  return 0.5 * (b + b.transpose());
}

/// Uniform points inside [lo, hi]^p.
inline DesignPoint random_point(std::mt19937_64& rng, int p, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  DesignPoint t(p);
  for (int k = 0; k < p; ++k) t[k] = u(rng);
  return t;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace oedflow::test
