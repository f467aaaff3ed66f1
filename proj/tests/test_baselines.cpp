#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "oedflow/baselines.hpp"
#include "oedflow/criteria.hpp"
#include "support.hpp"

using namespace oedflow;
using namespace oedflow::test;

namespace {

double log_det_dense(const Eigen::MatrixXd& rows, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd m = rows.transpose() * w.asDiagonal() * rows;
  return std::log(m.determinant());
}

// Best log det over all weight vectors on a simplex lattice with the given
// number of steps.
double brute_force_log_det(const Eigen::MatrixXd& rows, int steps) {
  const int m = static_cast<int>(rows.rows());
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd w(m);
  std::function<void(int, int)> visit = [&](int k, int left) {
    if (k == m - 1) {
      w[k] = static_cast<double>(left) / steps;
      const Eigen::MatrixXd info = rows.transpose() * w.asDiagonal() * rows;
      const double det = info.determinant();
      if (det > 0.0) best = std::max(best, std::log(det));
      return;
    }
    for (int i = 0; i <= left; ++i) {
      w[k] = static_cast<double>(i) / steps;
      visit(k + 1, left - i);
    }
  };
  visit(0, steps);
  return best;
}

}  // namespace

TEST_CASE("discrete objective examples") {
  const Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
  const DiscreteDesign half{rows, Eigen::Vector2d(0.5, 0.5)};
  CHECK(discrete_objective(Criterion::AOptimal, half) == doctest::Approx(4.0));
  CHECK(discrete_objective(Criterion::DOptimal, half) == doctest::Approx(std::log(0.25)));

  const DiscreteDesign single{Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1)};
  CHECK(discrete_objective(Criterion::AOptimal, single) == doctest::Approx(1.0));
  CHECK(std::abs(discrete_objective(Criterion::DOptimal, single)) < 1e-15);

  CHECK_THROWS_AS(discrete_objective(Criterion::DOptimal, {rows, Eigen::Vector2d(1.0, 0.0)}),
                  SingularInformationMatrix);
  CHECK_THROWS_AS((DiscreteDesign{rows, Eigen::Vector2d(0.7, 0.7)}.validate()), Error);
  CHECK_THROWS_AS((DiscreteDesign{rows, Eigen::Vector2d(1.5, -0.5)}.validate()), Error);
  CHECK_THROWS_AS((DiscreteDesign{rows, Eigen::Vector3d(0.2, 0.3, 0.5)}.validate()), SizeMismatch);
}

TEST_CASE("uniform weights reproduce the continuous objective") {
  std::mt19937_64 rng(2);
  const auto model = trig_model();
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + 3 * trial;
    Eigen::MatrixXd c(n, 2);
    for (int i = 0; i < n; ++i) c.row(i) = random_point(rng, 2, 0.0, 6.28).transpose();
    const ParticleEnsemble e(c);
    const Eigen::MatrixXd rows = evaluate_rows(model, e);
    const DiscreteDesign uniform{rows, Eigen::VectorXd::Constant(n, 1.0 / n)};
    for (Criterion crit : {Criterion::AOptimal, Criterion::DOptimal}) {
      const double want = objective(crit, model, e);
      CHECK(std::abs(discrete_objective(crit, uniform) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("weighted information matches the dense sum") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd rows = random_matrix(rng, 9, 3);
  Eigen::VectorXd w = random_matrix(rng, 9, 1).cwiseAbs();
  w /= w.sum();
  const Eigen::MatrixXd want = rows.transpose() * w.asDiagonal() * rows;
  const auto info = weighted_information(rows, w);
  CHECK((info.m - want).norm() < 1e-14);
  CHECK(info.m == info.m.transpose());
}

TEST_CASE("candidate grid layout") {
  const auto torus = DesignDomain::torus(2, 2.0 * std::numbers::pi);
  const Eigen::MatrixXd g = candidate_grid(torus, 4);
  REQUIRE(g.rows() == 16);
  CHECK(g(1, 0) == doctest::Approx(std::numbers::pi / 2));
  CHECK(g(1, 1) == 0.0);
  CHECK(g(4, 1) == doctest::Approx(std::numbers::pi / 2));
  CHECK(g.col(0).maxCoeff() < 2.0 * std::numbers::pi);

  const Eigen::MatrixXd b = candidate_grid(DesignDomain::box(2, 0.0, 1.0), 3);
  REQUIRE(b.rows() == 9);
  CHECK(b(0, 0) == 0.0);
  CHECK(b(2, 0) == 1.0);
  CHECK(b(8, 1) == 1.0);
  CHECK(b(4, 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(candidate_grid(torus, 0), ConfigError);
}

TEST_CASE("fedorov on orthonormal candidates returns uniform weights") {
  for (int d : {2, 3, 5}) {
    const auto r = fedorov_exchange_D(Eigen::MatrixXd::Identity(d, d));
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    for (int k = 0; k < d; ++k) CHECK(r.weights[k] == doctest::Approx(1.0 / d));
    CHECK(r.max_variance == doctest::Approx(d));
  }
  // The simplex lattice agrees that uniform weights are best.
  const Eigen::MatrixXd e3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK(brute_force_log_det(e3, 30) == doctest::Approx(3.0 * std::log(1.0 / 3.0)));

  const auto one = fedorov_exchange_D(Eigen::MatrixXd::Constant(1, 1, 2.0));
  CHECK(one.weights[0] == 1.0);
}

TEST_CASE("fedorov reaches the lattice optimum on small random problems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 2;
    const Eigen::MatrixXd rows = random_matrix(rng, 5, d);
    FedorovOptions opts;
    opts.max_iters = 100000;
    const auto r = fedorov_exchange_D(rows, opts);
    REQUIRE(r.converged);
    CHECK(r.weights.minCoeff() >= 0.0);
    CHECK(std::abs(r.weights.sum() - 1.0) < 1e-12);
    // Equivalence theorem: the gap to the optimum is at most d * tol.
    const double got = log_det_dense(rows, r.weights);
    CHECK(got >= brute_force_log_det(rows, 40) - d * opts.tol);
    CHECK(std::abs(got - r.objective_series.back()) < 1e-9);
  }
}

TEST_CASE("fedorov certificate, ascent and refresh consistency") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 4;
    const Eigen::MatrixXd rows = random_matrix(rng, 60, d);
    FedorovOptions opts;
    opts.max_iters = 50000;
    opts.refresh_every = 7;
    const auto r = fedorov_exchange_D(rows, opts);
    REQUIRE(r.converged);
    const Eigen::MatrixXd inv = (rows.transpose() * r.weights.asDiagonal() * rows).inverse();
    double max_v = 0.0;
    for (int k = 0; k < rows.rows(); ++k) max_v = std::max(max_v, (rows.row(k) * inv * rows.row(k).transpose()).value());
    CHECK(max_v <= d * (1.0 + opts.tol) + 1e-9);
    CHECK(std::abs(max_v - r.max_variance) < 1e-8);
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(60, 1.0 / 60);
    CHECK(r.objective_series.front() == doctest::Approx(log_det_dense(rows, uniform)));
    for (std::size_t k = 1; k < r.objective_series.size(); ++k) {
      CHECK(r.objective_series[k] >= r.objective_series[k - 1] - 1e-12);
    }
    CHECK(log_det_dense(rows, r.weights) >= log_det_dense(rows, uniform) - 1e-12);
  }
}

TEST_CASE("fedorov limits and failures") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd rows = random_matrix(rng, 40, 6);
  FedorovOptions opts;
  opts.max_iters = 3;
  opts.tol = 1e-9;
  const auto r = fedorov_exchange_D(rows, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.objective_series.size() == 4);

  Eigen::MatrixXd flat(3, 2);
  flat << 1, 1, 2, 2, -1, -1;
  CHECK_THROWS_AS(fedorov_exchange_D(flat), RankDeficientCandidates);
}

TEST_CASE("design to ensemble sampling") {
  Eigen::MatrixXd pts(4, 2);
  pts << 0, 0, 1, 0, 0, 1, 1, 1;
  const auto onehot = design_to_ensemble(pts, Eigen::Vector4d(0, 0, 1, 0), 50, 3);
  for (int i = 0; i < 50; ++i) CHECK(onehot[i] == pts.row(2).transpose());

  const int n = 4000;
  const auto spread = design_to_ensemble(pts, Eigen::Vector4d::Constant(0.25), n, 11);
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) counts[static_cast<int>(spread[i][0] + 2 * spread[i][1])]++;
  for (int c : counts) CHECK(std::abs(c - n / 4) <= 5.0 * std::sqrt(n));

  CHECK(design_to_ensemble(pts, Eigen::Vector4d::Constant(0.25), 100, 9).coords() ==
        design_to_ensemble(pts, Eigen::Vector4d::Constant(0.25), 100, 9).coords());
  CHECK_THROWS_AS(design_to_ensemble(pts, Eigen::Vector3d::Constant(1.0 / 3), 10, 1), SizeMismatch);
}
