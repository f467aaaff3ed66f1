#pragma once

#include <cstdint>
#include <vector>

#include "oedflow/flow.hpp"

namespace oedflow {

/// n draws of (theta1, theta2) on the 2-torus [0, 2pi)^2 with theta1
/// uniform and theta2 = theta1 +/- g, g ~ U[0, L], sign uniform. Throws
/// InvalidL unless 0 <= L <= pi and InvalidInit for any other domain.
ParticleEnsemble sample_rho_L(const DesignDomain& domain, double L, int n, std::uint64_t seed);

/// n i.i.d. uniform points on the domain box.
ParticleEnsemble sample_uniform(const DesignDomain& domain, int n, std::uint64_t seed);

struct LandscapeCurve {
  std::vector<double> L;
  std::vector<double> objective;  // mean over seeds
  std::vector<double> stderr_;    // standard error of that mean
  double uniform_ref = 0.0;
  double uniform_stderr = 0.0;
};

/// Objective of rho_L for each L, averaged over `n_seeds` independent
/// samples of size n (seeds seed, seed + 1, ...), plus the same average for
/// the uniform distribution on the torus.
LandscapeCurve landscape_sweep(Criterion c, const ExperimentModel& model,
                               const std::vector<double>& L_grid, int n, std::uint64_t seed,
                               int n_seeds = 10);

/// L values 0, pi/(count-1), ..., pi.
std::vector<double> default_L_grid(int count = 17);

struct FieldGrid {
  std::vector<std::vector<double>> axes;  // cell-centre coordinates per axis
  Eigen::MatrixXd points;                 // resolution^p x p, first axis fastest
  Eigen::MatrixXd direction;              // velocity at each point
  Eigen::VectorXd magnitude;              // row norms of direction

  /// Row index of the largest magnitude.
  Eigen::Index argmax() const;
};

/// Velocity field on a regular grid of cell centres, with the background
/// ensemble's factorization held fixed.
FieldGrid gradient_grid(Criterion c, const ExperimentModel& model,
                        const ParticleEnsemble& background, int resolution);

/// Exact W2 between equal-size empirical measures, with circular distance
/// on periodic axes. Throws SizeMismatch for unequal sizes or N > 4096.
double w2_exact(const DesignDomain& domain, const ParticleEnsemble& p, const ParticleEnsemble& q);

struct DtStudy {
  double dt_ref = 0.0;
  std::vector<double> dt;
  std::vector<double> discrepancy;  // W2(final(dt), final(dt_ref))
  std::vector<double> ratio;        // discrepancy[i] / discrepancy[i+1] for sorted dt (descending)
};

/// Runs the flow to time T for each dt and for dt_ref = min(dt) / 4. Each
/// T / dt must be an integer to 1e-9 relative, else ConfigError.
DtStudy dt_convergence_study(Criterion c, const ExperimentModel& model,
                             const ParticleEnsemble& initial, std::vector<double> dt_list,
                             double T, double max_step_fraction = 0.1);

struct NStudy {
  int n_ref = 0;
  int n_compare = 0;  // particles compared, min(N_list)
  std::vector<int> n;
  std::vector<double> mean_discrepancy;
  std::vector<std::vector<double>> per_seed;  // [n index][seed index]
  bool non_increasing = false;
};

/// For each seed, one uniform stream of N_ref = 2 max(N_list) initial
/// particles is drawn and every run starts from its first N particles.
/// After T steps the first min(N_list) particles of each run are compared
/// with the same particles of the N_ref run by exact W2.
NStudy n_convergence_study(Criterion c, const ExperimentModel& model, std::vector<int> n_list,
                           double dt, int T, const std::vector<std::uint64_t>& seeds,
                           double max_step_fraction = 0.1);

}  // namespace oedflow
