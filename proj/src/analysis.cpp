#include "oedflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oedflow/assignment.hpp"
#include "oedflow/parallel.hpp"

namespace oedflow {

namespace {

void require_angle_torus(const DesignDomain& domain) {
  if (!domain.is_angle_torus()) throw InvalidInit("rho_L needs the periodic square [0, 2pi)^2");
}

struct MeanStderr {
  double mean;
  double stderr_;
};

MeanStderr summarize(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = values.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

ParticleEnsemble take_first(const ParticleEnsemble& e, int n) {
  return ParticleEnsemble(e.coords().topRows(n));
}

}  // namespace

ParticleEnsemble sample_rho_L(const DesignDomain& domain, double L, int n, std::uint64_t seed) {
  if (!(L >= 0.0 && L <= std::numbers::pi)) {
    std::ostringstream msg;
    msg << "L = " << L << " outside [0, pi]";
    throw InvalidL(msg.str());
  }
  require_angle_torus(domain);
  if (n < 1) throw ConfigError("rho_L: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> gap(0.0, L);
  std::bernoulli_distribution flip(0.5);
  Eigen::MatrixXd coords(n, 2);
  for (int i = 0; i < n; ++i) {
    DesignPoint theta(2);
    theta[0] = angle(rng);
    const double g = L > 0.0 ? gap(rng) : 0.0;
    theta[1] = theta[0] + (flip(rng) ? g : -g);
    coords.row(i) = domain_project(domain, theta).transpose();
  }
  return ParticleEnsemble(std::move(coords));
}

ParticleEnsemble sample_uniform(const DesignDomain& domain, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("uniform sample: need at least one point");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd coords(n, domain.dim());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < domain.dim(); ++k) {
      coords(i, k) = std::uniform_real_distribution<double>(domain.lower(k), domain.upper(k))(rng);
    }
  }
  return ParticleEnsemble(std::move(coords));
}

std::vector<double> default_L_grid(int count) {
  if (count < 2) throw ConfigError("L grid needs at least two points");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = std::numbers::pi * i / (count - 1);
  grid.back() = std::numbers::pi;
  return grid;
}

LandscapeCurve landscape_sweep(Criterion c, const ExperimentModel& model,
                               const std::vector<double>& L_grid, int n, std::uint64_t seed,
                               int n_seeds) {
  require_angle_torus(model.domain());
  if (n_seeds < 1) throw ConfigError("landscape: need at least one seed");
  for (std::size_t i = 1; i < L_grid.size(); ++i) {
    if (!(L_grid[i] > L_grid[i - 1])) throw ConfigError("landscape: L grid must be increasing");
  }
  const int n_L = static_cast<int>(L_grid.size());
  // The last row of `values` holds the uniform reference.
  std::vector<std::vector<double>> values(n_L + 1, std::vector<double>(n_seeds));
  parallel_for((n_L + 1) * n_seeds, [&](int job) {
    const int li = job / n_seeds;
    const int s = job % n_seeds;
    const std::uint64_t sd = seed + static_cast<std::uint64_t>(s);
    const ParticleEnsemble e = li < n_L ? sample_rho_L(model.domain(), L_grid[li], n, sd)
                                        : sample_uniform(model.domain(), n, sd);
    values[li][s] = objective(c, model, e);
  });

  LandscapeCurve curve;
  curve.L = L_grid;
  for (int li = 0; li < n_L; ++li) {
    const auto ms = summarize(values[li]);
    curve.objective.push_back(ms.mean);
    curve.stderr_.push_back(ms.stderr_);
  }
  const auto ref = summarize(values[n_L]);
  curve.uniform_ref = ref.mean;
  curve.uniform_stderr = ref.stderr_;
  return curve;
}

Eigen::Index FieldGrid::argmax() const {
  Eigen::Index best = 0;
  magnitude.maxCoeff(&best);
  return best;
}

FieldGrid gradient_grid(Criterion c, const ExperimentModel& model,
                        const ParticleEnsemble& background, int resolution) {
  if (resolution < 1) throw ConfigError("field: resolution must be positive");
  const DesignDomain& domain = model.domain();
  const int p = domain.dim();
  FieldGrid grid;
  grid.axes.resize(p);
  Eigen::Index count = 1;
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < resolution; ++i) {
      grid.axes[k].push_back(domain.lower(k) + domain.extent(k) * (i + 0.5) / resolution);
    }
    count *= resolution;
  }
  grid.points.resize(count, p);
  for (Eigen::Index r = 0; r < count; ++r) {
    Eigen::Index rest = r;
    for (int k = 0; k < p; ++k) {
      grid.points(r, k) = grid.axes[k][rest % resolution];
      rest /= resolution;
    }
  }

  const SpdFactor factor = factorize(assemble_information_matrix(model, background));
  grid.direction.resize(count, p);
  grid.magnitude.resize(count);
  parallel_for(static_cast<int>(count), [&](int r) {
    const Eigen::VectorXd v = velocity(c, model, factor, grid.points.row(r).transpose());
    grid.direction.row(r) = v.transpose();
    grid.magnitude[r] = v.norm();
  });
  return grid;
}

double w2_exact(const DesignDomain& domain, const ParticleEnsemble& p, const ParticleEnsemble& q) {
  if (p.size() != q.size()) throw SizeMismatch("w2: ensembles must have equal size");
  if (p.size() > 4096) throw SizeMismatch("w2: at most 4096 particles");
  if (p.dim() != domain.dim() || q.dim() != domain.dim()) throw SizeMismatch("w2: dimension mismatch");
  const int n = p.size();
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost(i, j) = domain.squared_distance(p[i], q[j]);
  }
  const auto match = solve_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost(i, match[i]);
  return std::sqrt(std::max(0.0, total / n));
}

namespace {

ParticleEnsemble run_to_end(Criterion c, const ExperimentModel& model, const ParticleEnsemble& initial,
                            double dt, int steps, double max_step_fraction) {
  FlowConfig config;
  config.criterion = c;
  config.n_particles = initial.size();
  config.dt = dt;
  config.n_iters = steps;
  config.snapshot_every = std::max(1, steps);
  config.max_step_fraction = max_step_fraction;
  FlowResult result = run_flow(config, model, initial);
  result.throw_if_failed();
  return result.final_ensemble;
}

int step_count(double T, double dt) {
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "T = " << T << " is not an integer multiple of dt = " << dt;
    throw ConfigError(msg.str());
  }
  return static_cast<int>(rounded);
}

}  // namespace

DtStudy dt_convergence_study(Criterion c, const ExperimentModel& model,
                             const ParticleEnsemble& initial, std::vector<double> dt_list,
                             double T, double max_step_fraction) {
  if (dt_list.empty()) throw ConfigError("dt study: empty dt list");
  if (T < 0.0) throw ConfigError("dt study: negative horizon");
  for (double dt : dt_list) {
    if (!(dt > 0.0)) throw ConfigError("dt study: dt must be positive");
  }
  std::sort(dt_list.begin(), dt_list.end(), std::greater<>());
  DtStudy study;
  study.dt = dt_list;
  study.dt_ref = dt_list.back() / 4.0;
  const ParticleEnsemble reference =
      run_to_end(c, model, initial, study.dt_ref, step_count(T, study.dt_ref), max_step_fraction);
  for (double dt : dt_list) {
    const ParticleEnsemble final = run_to_end(c, model, initial, dt, step_count(T, dt), max_step_fraction);
    study.discrepancy.push_back(w2_exact(model.domain(), final, reference));
  }
  for (std::size_t i = 0; i + 1 < study.discrepancy.size(); ++i) {
    study.ratio.push_back(study.discrepancy[i] / study.discrepancy[i + 1]);
  }
  return study;
}

NStudy n_convergence_study(Criterion c, const ExperimentModel& model, std::vector<int> n_list,
                           double dt, int T, const std::vector<std::uint64_t>& seeds,
                           double max_step_fraction) {
  if (n_list.empty() || seeds.empty()) throw ConfigError("N study: empty N list or seed list");
  std::sort(n_list.begin(), n_list.end());
  if (n_list.front() < 1 || n_list.back() > 2048) throw ConfigError("N study: N must lie in [1, 2048]");
  NStudy study;
  study.n = n_list;
  study.n_ref = 2 * n_list.back();
  study.n_compare = n_list.front();
  study.per_seed.assign(n_list.size(), {});
  for (std::uint64_t seed : seeds) {
    const ParticleEnsemble pool = sample_uniform(model.domain(), study.n_ref, seed);
    const ParticleEnsemble reference =
        take_first(run_to_end(c, model, pool, dt, T, max_step_fraction), study.n_compare);
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      const ParticleEnsemble final =
          run_to_end(c, model, take_first(pool, n_list[i]), dt, T, max_step_fraction);
      study.per_seed[i].push_back(w2_exact(model.domain(), take_first(final, study.n_compare), reference));
    }
  }
  for (const auto& values : study.per_seed) study.mean_discrepancy.push_back(summarize(values).mean);
  study.non_increasing = std::is_sorted(study.mean_discrepancy.rbegin(), study.mean_discrepancy.rend());
  return study;
}

}  // namespace oedflow
