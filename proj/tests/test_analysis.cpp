#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oedflow/analysis.hpp"
#include "oedflow/assignment.hpp"
#include "support.hpp"

using namespace oedflow;
using namespace oedflow::test;

namespace {

constexpr double kPi = std::numbers::pi;
const DesignDomain kTorus = DesignDomain::torus(2, 2.0 * kPi);

double circdist(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

ParticleEnsemble random_ensemble(std::mt19937_64& rng, const DesignDomain& domain, int n) {
  Eigen::MatrixXd c(n, domain.dim());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < domain.dim(); ++k) {
      std::uniform_real_distribution<double> u(domain.lower(k), domain.upper(k));
      c(i, k) = u(rng);
    }
  return ParticleEnsemble(c);
}

// Minimum over all assignments, by enumeration.
double brute_force_w2(const DesignDomain& domain, const ParticleEnsemble& p, const ParticleEnsemble& q) {
  std::vector<int> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < p.size(); ++i) cost += domain.squared_distance(p[i], q[perm[i]]);
    best = std::min(best, cost / p.size());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("rho_L sampler") {
  const auto zero = sample_rho_L(kTorus, 0.0, 500, 1);
  for (int i = 0; i < zero.size(); ++i) CHECK(zero[i][0] == zero[i][1]);

  for (double L : {0.3, 1.0, kPi}) {
    const auto e = sample_rho_L(kTorus, L, 2000, 7);
    CHECK(e.within(kTorus));
    for (int i = 0; i < e.size(); ++i) CHECK(circdist(e[i][0], e[i][1]) <= L + 1e-12);
  }

  // Kolmogorov-Smirnov distance of the circular gap against U[0, pi].
  const int n = 100000;
  const auto full = sample_rho_L(kTorus, kPi, n, 3);
  std::vector<double> gaps(n);
  for (int i = 0; i < n; ++i) gaps[i] = circdist(full[i][0], full[i][1]);
  std::sort(gaps.begin(), gaps.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = gaps[i] / kPi;
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 0.01);

  CHECK_THROWS_AS(sample_rho_L(kTorus, -0.1, 10, 1), InvalidL);
  CHECK_THROWS_AS(sample_rho_L(kTorus, 3.2, 10, 1), InvalidL);
  CHECK_THROWS_AS(sample_rho_L(DesignDomain::box(2, 0.0, 1.0), 1.0, 10, 1), InvalidInit);
  CHECK(sample_rho_L(kTorus, 1.0, 50, 5).coords() == sample_rho_L(kTorus, 1.0, 50, 5).coords());
}

TEST_CASE("uniform sampler and L grid") {
  const auto box = DesignDomain::box(3, -1.0, 2.0);
  const auto e = sample_uniform(box, 1000, 4);
  CHECK(e.within(box));
  CHECK(e.dim() == 3);
  CHECK(e.coords().col(0).mean() == doctest::Approx(0.5).epsilon(0.1));

  const auto grid = default_L_grid(5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == kPi);
  CHECK(grid[2] == doctest::Approx(kPi / 2));
  CHECK(default_L_grid().size() == 17);
}

TEST_CASE("landscape sweep") {
  const auto model = trig_model();
  const auto grid = default_L_grid(5);
  const auto curve = landscape_sweep(Criterion::AOptimal, model, grid, 4000, 10, 10);
  REQUIRE(curve.L == grid);
  REQUIRE(curve.objective.size() == grid.size());
  REQUIRE(curve.stderr_.size() == grid.size());
  for (double s : curve.stderr_) CHECK(s > 0.0);
  // rho_pi has uniform gaps, so it is the uniform distribution on the torus.
  const double se = std::hypot(curve.stderr_.back(), curve.uniform_stderr);
  CHECK(std::abs(curve.objective.back() - curve.uniform_ref) <= 3.0 * se);

  const auto again = landscape_sweep(Criterion::AOptimal, model, grid, 4000, 10, 10);
  CHECK(again.objective == curve.objective);

  CHECK_THROWS_AS(landscape_sweep(Criterion::AOptimal, model, {1.0, 0.5}, 100, 1, 2), ConfigError);
}

TEST_CASE("gradient grid") {
  const auto model = trig_model();
  std::mt19937_64 rng(6);
  const auto bg = random_ensemble(rng, kTorus, 200);
  const auto field = gradient_grid(Criterion::AOptimal, model, bg, 8);
  REQUIRE(field.points.rows() == 64);
  REQUIRE(field.axes.size() == 2);
  CHECK(field.axes[0][0] == doctest::Approx(2.0 * kPi / 16));
  CHECK(field.points(1, 0) == field.axes[0][1]);
  CHECK(field.points(1, 1) == field.axes[1][0]);
  const SpdFactor f = factorize(assemble_information_matrix(model, bg));
  for (int i = 0; i < 64; ++i) {
    const Eigen::VectorXd v = velocity(Criterion::AOptimal, model, f, field.points.row(i).transpose());
    CHECK(field.direction.row(i).transpose() == v);
    CHECK(field.magnitude[i] == field.direction.row(i).norm());
  }
  Eigen::Index best = 0;
  field.magnitude.maxCoeff(&best);
  CHECK(field.argmax() == best);

  const ConstantRowModel constant(Eigen::VectorXd::Ones(1), kTorus);
  const auto flat = gradient_grid(Criterion::DOptimal, constant, bg, 4);
  CHECK(flat.magnitude.maxCoeff() == 0.0);
}

TEST_CASE("assignment solver matches enumeration") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = trial % 3 == 0 ? std::round(u(rng)) : u(rng);
    const auto a = solve_assignment(cost);
    std::vector<int> seen(a);
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < n; ++i) CHECK(seen[i] == i);
    double got = 0.0;
    for (int i = 0; i < n; ++i) got += cost(i, a[i]);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK_THROWS_AS(solve_assignment(Eigen::MatrixXd::Zero(2, 3)), SizeMismatch);
}

TEST_CASE("exact W2") {
  std::mt19937_64 rng(14);
  const auto p = random_ensemble(rng, kTorus, 20);
  CHECK(w2_exact(kTorus, p, p) == 0.0);

  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0.1, 3.0;
  b << 6.2, 3.5;
  const double want = std::hypot(0.1 + 2.0 * kPi - 6.2, 0.5);
  CHECK(w2_exact(kTorus, ParticleEnsemble(a), ParticleEnsemble(b)) == doctest::Approx(want));

  for (int trial = 0; trial < 30; ++trial) {
    const auto& domain = trial % 2 == 0 ? kTorus : DesignDomain::box(2, 0.0, 1.0);
    const int n = trial < 20 ? 3 : 6;
    const auto x = random_ensemble(rng, domain, n);
    const auto y = random_ensemble(rng, domain, n);
    CHECK(w2_exact(domain, x, y) == doctest::Approx(brute_force_w2(domain, x, y)).epsilon(1e-12));
  }

  // Metric properties on random triples.
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_ensemble(rng, kTorus, 15);
    const auto y = random_ensemble(rng, kTorus, 15);
    const auto z = random_ensemble(rng, kTorus, 15);
    const double xy = w2_exact(kTorus, x, y);
    CHECK(std::abs(xy - w2_exact(kTorus, y, x)) < 1e-9);
    CHECK(xy <= w2_exact(kTorus, x, z) + w2_exact(kTorus, z, y) + 1e-9);

    Eigen::MatrixXd reversed = x.coords().colwise().reverse();
    CHECK(w2_exact(kTorus, x, ParticleEnsemble(reversed)) < 1e-12);
  }

  CHECK_THROWS_AS(w2_exact(kTorus, random_ensemble(rng, kTorus, 3), random_ensemble(rng, kTorus, 4)),
                  SizeMismatch);
  const auto big = ParticleEnsemble(Eigen::MatrixXd::Zero(4097, 2));
  CHECK_THROWS_AS(w2_exact(kTorus, big, big), SizeMismatch);
}

TEST_CASE("dt convergence study bookkeeping") {
  const auto model = trig_model();
  std::mt19937_64 rng(15);
  const auto e = random_ensemble(rng, kTorus, 12);
  const auto zero = dt_convergence_study(Criterion::DOptimal, model, e, {1e-3, 2e-3}, 0.0);
  CHECK(zero.dt == std::vector<double>{2e-3, 1e-3});
  CHECK(zero.dt_ref == doctest::Approx(2.5e-4));
  for (double d : zero.discrepancy) CHECK(d == 0.0);

  const auto study = dt_convergence_study(Criterion::DOptimal, model, e, {1e-3, 2e-3, 5e-4}, 0.01);
  CHECK(study.discrepancy.size() == 3);
  CHECK(study.ratio.size() == 2);
  CHECK(study.discrepancy[0] > study.discrepancy[1]);
  CHECK(study.ratio[0] == doctest::Approx(study.discrepancy[0] / study.discrepancy[1]));

  CHECK_THROWS_AS(dt_convergence_study(Criterion::DOptimal, model, e, {3e-3}, 0.01), ConfigError);
  CHECK_THROWS_AS(dt_convergence_study(Criterion::DOptimal, model, e, {}, 0.01), ConfigError);
}

TEST_CASE("N convergence study bookkeeping") {
  const auto model = trig_model();
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto study = n_convergence_study(Criterion::AOptimal, model, {32, 8, 16}, 1e-4, 5, seeds);
  CHECK(study.n == std::vector<int>{8, 16, 32});
  CHECK(study.n_ref == 64);
  CHECK(study.n_compare == 8);
  REQUIRE(study.per_seed.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(study.per_seed[i].size() == 3);
    const double mean = (study.per_seed[i][0] + study.per_seed[i][1] + study.per_seed[i][2]) / 3.0;
    CHECK(study.mean_discrepancy[i] == doctest::Approx(mean));
  }
  const bool sorted = study.mean_discrepancy[0] >= study.mean_discrepancy[1] &&
                      study.mean_discrepancy[1] >= study.mean_discrepancy[2];
  CHECK(study.non_increasing == sorted);

  const auto again = n_convergence_study(Criterion::AOptimal, model, {32, 8, 16}, 1e-4, 5, seeds);
  CHECK(again.per_seed == study.per_seed);

  // With T = 0 every run keeps its initial particles, which are shared.
  const auto still = n_convergence_study(Criterion::AOptimal, model, {8, 16}, 1e-3, 0, seeds);
  for (double m : still.mean_discrepancy) CHECK(m == 0.0);

  CHECK_THROWS_AS(n_convergence_study(Criterion::AOptimal, model, {4096}, 1e-3, 1, seeds), ConfigError);
  CHECK_THROWS_AS(n_convergence_study(Criterion::AOptimal, model, {8}, 1e-3, 1, {}), ConfigError);
}
