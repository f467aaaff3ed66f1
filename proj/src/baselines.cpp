#include "oedflow/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace oedflow {

void DiscreteDesign::validate() const {
  if (weights.size() != rows.rows()) throw SizeMismatch("design: one weight per candidate row required");
  if (weights.size() == 0) throw Error("design: no candidates");
  if (weights.minCoeff() < 0.0) throw Error("design: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw Error("design: weights must sum to 1");
}

InformationMatrix weighted_information(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights) {
  const Eigen::Index d = rows.cols();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    if (weights[k] == 0.0) continue;
    m.selfadjointView<Eigen::Lower>().rankUpdate(rows.row(k).transpose(), weights[k]);
  }
  Eigen::MatrixXd full = m.selfadjointView<Eigen::Lower>();
  return {0.5 * (full + full.transpose())};
}

double discrete_objective(Criterion c, const DiscreteDesign& design) {
  design.validate();
  return objective(c, factorize(weighted_information(design.rows, design.weights)));
}

Eigen::MatrixXd candidate_grid(const DesignDomain& domain, int per_axis) {
  if (per_axis < 1) throw ConfigError("candidate grid needs at least one point per axis");
  const int p = domain.dim();
  Eigen::Index m = 1;
  for (int k = 0; k < p; ++k) m *= per_axis;
  std::vector<std::vector<double>> axes(p);
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < per_axis; ++i) {
      double x;
      if (domain.mode(k) == Boundary::Periodic) {
        x = domain.lower(k) + domain.extent(k) * i / per_axis;
      } else {
        x = per_axis == 1 ? 0.5 * (domain.lower(k) + domain.upper(k))
                          : domain.lower(k) + domain.extent(k) * i / (per_axis - 1);
      }
      axes[k].push_back(x);
    }
  }
  Eigen::MatrixXd grid(m, p);
  for (Eigen::Index r = 0; r < m; ++r) {
    Eigen::Index rest = r;
    for (int k = 0; k < p; ++k) {
      grid(r, k) = axes[k][rest % per_axis];
      rest /= per_axis;
    }
  }
  return grid;
}

namespace {

struct VarianceState {
  Eigen::MatrixXd inverse;   // M[w]^-1
  Eigen::VectorXd variance;  // a_k^T M^-1 a_k
  double log_det = 0.0;
};

VarianceState exact_state(const Eigen::MatrixXd& rows, const Eigen::VectorXd& w) {
  const SpdFactor factor = factorize(weighted_information(rows, w));
  VarianceState s;
  s.inverse = factor.llt().solve(Eigen::MatrixXd::Identity(rows.cols(), rows.cols()));
  s.variance = (rows * s.inverse).cwiseProduct(rows).rowwise().sum();
  s.log_det = factor.log_det();
  return s;
}

}  // namespace

FedorovResult fedorov_exchange_D(const Eigen::MatrixXd& rows, const FedorovOptions& options) {
  const Eigen::Index m = rows.rows();
  const double d = static_cast<double>(rows.cols());
  if (m == 0 || rows.cols() == 0) throw RankDeficientCandidates("fedorov: empty candidate set");
  if (options.max_iters < 0 || !(options.tol > 0.0) || options.refresh_every < 1) {
    throw ConfigError("fedorov: invalid options");
  }

  FedorovResult result;
  result.weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  VarianceState state;
  try {
    state = exact_state(rows, result.weights);
  } catch (const SingularInformationMatrix& e) {
    std::ostringstream msg;
    msg << "fedorov: candidate rows do not span R^" << rows.cols() << " (" << e.what() << ")";
    throw RankDeficientCandidates(msg.str());
  }
  result.objective_series.push_back(state.log_det);

  int since_refresh = 0;
  for (;;) {
    Eigen::Index best = 0;
    const double v = state.variance.maxCoeff(&best);
    result.max_variance = v;
    if (v <= d * (1.0 + options.tol)) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iters) break;

    const double alpha = (v - d) / (d * (v - 1.0));
    const double keep = 1.0 - alpha;
    result.weights *= keep;
    result.weights[best] += alpha;
    ++result.iterations;

    if (++since_refresh >= options.refresh_every) {
      since_refresh = 0;
      state = exact_state(rows, result.weights);
    } else {
      // Sherman-Morrison on M' = keep * (M + beta a a^T), beta = alpha / keep.
      const double beta = alpha / keep;
      const Eigen::VectorXd ma = state.inverse * rows.row(best).transpose();
      const double denom = 1.0 + beta * v;
      const Eigen::VectorXd cross = rows * ma;
      state.inverse = (state.inverse - (beta / denom) * ma * ma.transpose()) / keep;
      state.variance = (state.variance - (beta / denom) * cross.cwiseAbs2()) / keep;
      state.log_det += d * std::log(keep) + std::log(denom);
    }
    result.objective_series.push_back(state.log_det);
  }
  return result;
}

ParticleEnsemble design_to_ensemble(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                                    int n, std::uint64_t seed) {
  if (weights.size() != points.rows()) throw SizeMismatch("design_to_ensemble: weight count mismatch");
  if (n < 1) throw ConfigError("design_to_ensemble: need at least one particle");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<Eigen::Index> pick(weights.data(), weights.data() + weights.size());
  Eigen::MatrixXd coords(n, points.cols());
  for (int i = 0; i < n; ++i) coords.row(i) = points.row(pick(rng));
  return ParticleEnsemble(std::move(coords));
}

}  // namespace oedflow
