#include "oedflow/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

#include "oedflow/parallel.hpp"

namespace oedflow {

std::string to_string(Criterion c) { return c == Criterion::AOptimal ? "A" : "D"; }

Criterion parse_criterion(const std::string& text) {
  std::string t;
  for (char ch : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (t == "A" || t == "AOPTIMAL" || t == "A-OPTIMAL") return Criterion::AOptimal;
  if (t == "D" || t == "DOPTIMAL" || t == "D-OPTIMAL") return Criterion::DOptimal;
  throw ConfigError("unknown criterion '" + text + "' (expected A or D)");
}

double objective(Criterion c, const SpdFactor& factor) {
  return c == Criterion::AOptimal ? factor.trace_inverse() : factor.log_det();
}

double objective(Criterion c, const ExperimentModel& model, const ParticleEnsemble& ensemble) {
  return objective(c, factorize(assemble_information_matrix(model, ensemble)));
}

double frechet(Criterion c, const SpdFactor& factor, const Eigen::VectorXd& row) {
  if (c == Criterion::AOptimal) {
    // a^T M^-2 a = |M^-1 a|^2
    return -factor.solve(row).squaredNorm();
  }
  // a^T M^-1 a = |L^-1 a|^2
  return factor.half_solve(row).squaredNorm();
}

double frechet(Criterion c, const ExperimentModel& model, const SpdFactor& factor,
               const DesignPoint& theta) {
  return frechet(c, factor, model.row(theta));
}

Eigen::VectorXd velocity(Criterion c, const SpdFactor& factor, const Eigen::VectorXd& row,
                         const Eigen::MatrixXd& jacobian) {
  if (c == Criterion::AOptimal) {
    return -2.0 * (jacobian.transpose() * factor.solve_squared(row));
  }
  return 2.0 * (jacobian.transpose() * factor.solve(row));
}

Eigen::VectorXd velocity(Criterion c, const ExperimentModel& model, const SpdFactor& factor,
                         const DesignPoint& theta) {
  return velocity(c, factor, model.row(theta), model.row_jacobian(theta));
}

double hessian_form(Criterion c, const InformationMatrix& info, const PerturbationMatrix& pert) {
  const Eigen::MatrixXd& d = pert.d;
  if (d.rows() != info.m.rows() || d.cols() != info.m.cols()) {
    throw SizeMismatch("hessian_form: perturbation and information matrix sizes differ");
  }
  const double asym = (d - d.transpose()).norm();
  if (asym > 1e-10 * d.norm()) throw AsymmetricPerturbation("perturbation matrix is not symmetric");

  const SpdFactor factor(info.m);
  const auto& llt = factor.llt();
  // S = L^-1 D L^-T, so M^-1 D M^-1 D M^-1 = L^-T S S L^-1.
  Eigen::MatrixXd s = llt.matrixL().solve(d);
  s = llt.matrixL().solve(s.transpose().eval());
  if (c == Criterion::AOptimal) {
    const Eigen::MatrixXd linv_t_s =
        llt.matrixU().solve(s);  // L^-T S; Tr(L^-T S S L^-1) = |L^-T S|_F^2
    return 2.0 * linv_t_s.squaredNorm();
  }
  return -s.squaredNorm();
}

PerturbationMatrix perturbation_matrix(const ExperimentModel& model, const ParticleEnsemble& plus,
                                       const ParticleEnsemble& minus) {
  const auto mp = assemble_information_matrix(model, plus);
  const auto mm = assemble_information_matrix(model, minus);
  return {mp.m - mm.m};
}

Residual stationarity_residual(Criterion c, const ExperimentModel& model,
                               const ParticleEnsemble& ensemble) {
  const Eigen::MatrixXd rows = evaluate_rows(model, ensemble);
  const SpdFactor factor(information_from_rows(rows).m);
  std::vector<double> speed(ensemble.size());
  parallel_for(ensemble.size(), [&](int i) {
    const auto theta = ensemble[i];
    speed[i] = velocity(c, factor, rows.row(i).transpose(), model.row_jacobian(theta)).norm();
  });
  Residual r;
  double sq = 0.0;
  for (double s : speed) {
    r.max = std::max(r.max, s);
    sq += s * s;
  }
  r.rms = std::sqrt(sq / static_cast<double>(speed.size()));
  return r;
}

}  // namespace oedflow
