#pragma once

#include <string>

#include "oedflow/core.hpp"

namespace oedflow {

/// A-optimal minimizes Tr(M^-1); D-optimal maximizes log det M.
enum class Criterion { AOptimal, DOptimal };

enum class Sense { Minimize, Maximize };

constexpr Sense sense(Criterion c) {
  return c == Criterion::AOptimal ? Sense::Minimize : Sense::Maximize;
}

/// +1 for minimization (particles descend), -1 for maximization (ascend).
constexpr double descent_sign(Criterion c) { return sense(c) == Sense::Minimize ? 1.0 : -1.0; }

std::string to_string(Criterion c);
/// Accepts "A"/"D" (any case) or "AOptimal"/"DOptimal".
Criterion parse_criterion(const std::string& text);

/// Symmetric matrix A^T A[delta rho] for a signed perturbation delta rho.
struct PerturbationMatrix {
  Eigen::MatrixXd d;
};

struct Residual {
  double max = 0.0;
  double rms = 0.0;
};

double objective(Criterion c, const SpdFactor& factor);
double objective(Criterion c, const ExperimentModel& model, const ParticleEnsemble& ensemble);

/// First variation of the criterion at a design point, given the row there.
double frechet(Criterion c, const SpdFactor& factor, const Eigen::VectorXd& row);
double frechet(Criterion c, const ExperimentModel& model, const SpdFactor& factor,
               const DesignPoint& theta);

/// Gradient in theta of the first variation: -2 J^T M^-2 a (A) or
/// +2 J^T M^-1 a (D), for row a and d x p Jacobian J.
Eigen::VectorXd velocity(Criterion c, const SpdFactor& factor, const Eigen::VectorXd& row,
                         const Eigen::MatrixXd& jacobian);
Eigen::VectorXd velocity(Criterion c, const ExperimentModel& model, const SpdFactor& factor,
                         const DesignPoint& theta);

/// Second variation along delta rho: 2 Tr(M^-1 D M^-1 D M^-1) for A and
/// -Tr(D M^-1 D M^-1) for D. Throws AsymmetricPerturbation if D is not
/// symmetric to 1e-10 relative.
double hessian_form(Criterion c, const InformationMatrix& info, const PerturbationMatrix& pert);

/// D = M[plus] - M[minus].
PerturbationMatrix perturbation_matrix(const ExperimentModel& model, const ParticleEnsemble& plus,
                                       const ParticleEnsemble& minus);

/// Max and root-mean-square velocity norm over the ensemble.
Residual stationarity_residual(Criterion c, const ExperimentModel& model,
                               const ParticleEnsemble& ensemble);

}  // namespace oedflow
