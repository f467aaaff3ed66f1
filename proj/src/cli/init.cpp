#include "oedflow/cli/init.hpp"

#include <numbers>
#include <random>

#include "oedflow/analysis.hpp"
#include "oedflow/baselines.hpp"
#include "oedflow/cli/emit.hpp"

namespace oedflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_torus(const DesignDomain& domain, const std::string& scheme) {
  if (!domain.is_angle_torus()) {
    throw InvalidInit("init '" + scheme + "' needs the periodic design square [0, 2pi)^2");
  }
}

void require_count(int n) {
  if (n < 1) throw InvalidInit("init needs at least one particle");
}

}  // namespace

ParticleEnsemble sample_entire(const DesignDomain& domain, int n, std::uint64_t seed) {
  require_torus(domain, "entire");
  require_count(n);
  return sample_uniform(domain, n, seed);
}

ParticleEnsemble sample_lshape(const DesignDomain& domain, int n, std::uint64_t seed) {
  require_torus(domain, "lshape");
  require_count(n);
  // Rejection from the square; the L-shape covers 7/16 of it.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Eigen::MatrixXd coords(n, 2);
  for (int i = 0; i < n;) {
    const double a = angle(rng);
    const double b = angle(rng);
    if (a <= std::numbers::pi / 2 || b <= std::numbers::pi / 2) {
      coords(i, 0) = a;
      coords(i, 1) = b;
      ++i;
    }
  }
  return ParticleEnsemble(std::move(coords));
}

ParticleEnsemble sample_diagonal(const DesignDomain& domain, int n, std::uint64_t seed,
                                 double half_width) {
  require_torus(domain, "diagonal");
  require_count(n);
  if (!(half_width >= 0.0 && half_width <= std::numbers::pi)) {
    throw InvalidInit("diagonal half-width must lie in [0, pi]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> offset(-half_width, half_width);
  Eigen::MatrixXd coords(n, 2);
  for (int i = 0; i < n; ++i) {
    DesignPoint theta(2);
    theta[0] = angle(rng);
    theta[1] = theta[0] + offset(rng);
    coords.row(i) = domain_project(domain, theta).transpose();
  }
  return ParticleEnsemble(std::move(coords));
}

ParticleEnsemble init_ensemble(const RunConfig& config, const ExperimentModel& model,
                               int grid_per_axis) {
  const DesignDomain& domain = model.domain();
  const std::string& scheme = config.init;
  if (scheme == "entire") return sample_entire(domain, config.N, config.seed);
  if (scheme == "lshape") return sample_lshape(domain, config.N, config.seed);
  if (scheme == "diagonal") return sample_diagonal(domain, config.N, config.seed);
  if (scheme == "uniform") {
    require_count(config.N);
    return sample_uniform(domain, config.N, config.seed);
  }
  if (scheme == "fedorov") {
    if (config.criterion != Criterion::DOptimal) {
      throw InvalidInit("init 'fedorov' is only defined for the D-optimal criterion");
    }
    require_count(config.N);
    const int per_axis = config.grid_per_axis > 0 ? config.grid_per_axis : grid_per_axis;
    const Eigen::MatrixXd points = candidate_grid(domain, per_axis);
    const Eigen::MatrixXd rows = evaluate_rows(model, ParticleEnsemble(points));
    const FedorovResult fed = fedorov_exchange_D(rows, {config.max_iters, config.tol});
    return design_to_ensemble(points, fed.weights, config.N, config.seed);
  }
  if (scheme == "file") {
    if (config.init_file.empty()) throw InvalidInit("init 'file' needs init_file");
    const auto snapshots = read_particles_csv(config.init_file);
    if (snapshots.empty()) throw InvalidInit("no particles in " + config.init_file);
    const ParticleEnsemble& last = snapshots.back().ensemble;
    if (last.dim() != domain.dim() || !last.within(domain)) {
      throw InvalidInit("particles in " + config.init_file + " do not fit the design domain");
    }
    if (last.size() != config.N) throw InvalidInit("particle count in " + config.init_file + " differs from N");
    return last;
  }
  throw InvalidInit("unknown init scheme '" + scheme + "'");
}

}  // namespace oedflow
