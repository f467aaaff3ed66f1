#pragma once

#include <cstdint>
#include <vector>

#include "oedflow/criteria.hpp"

namespace oedflow {

/// Weighted design over a finite candidate set: m candidate rows (m x d)
/// and simplex weights.
struct DiscreteDesign {
  Eigen::MatrixXd rows;
  Eigen::VectorXd weights;

  /// Throws Error unless weights are nonnegative and sum to 1 within 1e-12.
  void validate() const;
};

/// sum_k w_k a_k a_k^T, accumulated in index order.
InformationMatrix weighted_information(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights);

/// Tr(M[w]^-1) for A and log det M[w] for D.
double discrete_objective(Criterion c, const DiscreteDesign& design);

/// Regular tensor grid over the domain with `per_axis` points per axis
/// (m = per_axis^p rows, first axis fastest). Periodic axes use
/// lower + k * extent / per_axis; clamped axes include both ends.
Eigen::MatrixXd candidate_grid(const DesignDomain& domain, int per_axis);

struct FedorovOptions {
  int max_iters = 10000;
  double tol = 1e-3;
  /// Recompute M[w]^-1 and the variances from scratch this often.
  int refresh_every = 100;
};

struct FedorovResult {
  Eigen::VectorXd weights;
  int iterations = 0;
  bool converged = false;
  double max_variance = 0.0;            // max_k a_k^T M[w]^-1 a_k at return
  std::vector<double> objective_series;  // log det M[w], starting point first
};

/// Fedorov-Wynn vertex exchange for D-optimal weights, started from uniform
/// weights: w <- (1 - alpha) w + alpha e_k for the candidate k with the
/// largest variance v, alpha = (v - d) / (d (v - 1)). Stops once
/// max variance <= d (1 + tol). Throws RankDeficientCandidates when the
/// candidate rows do not span R^d. Hitting max_iters returns the last
/// iterate with converged = false.
FedorovResult fedorov_exchange_D(const Eigen::MatrixXd& rows, const FedorovOptions& options = {});

/// N i.i.d. draws from the categorical distribution `weights` over the
/// candidate design points (m x p). Deterministic per seed.
ParticleEnsemble design_to_ensemble(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                                    int n, std::uint64_t seed);

}  // namespace oedflow
