#include "oedflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "oedflow/parallel.hpp"

namespace oedflow {

DesignDomain::DesignDomain(std::vector<double> lower, std::vector<double> upper,
                           std::vector<Boundary> modes)
    : lower_(std::move(lower)), upper_(std::move(upper)), modes_(std::move(modes)) {
  if (lower_.empty() || lower_.size() != upper_.size() || lower_.size() != modes_.size()) {
    throw Error("DesignDomain: bounds and modes must be non-empty and of equal length");
  }
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!(lower_[k] < upper_[k])) {
      std::ostringstream msg;
      msg << "DesignDomain: axis " << k << " has lower >= upper";
      throw Error(msg.str());
    }
  }
}

DesignDomain DesignDomain::torus(int p, double period) {
  return DesignDomain(std::vector<double>(p, 0.0), std::vector<double>(p, period),
                      std::vector<Boundary>(p, Boundary::Periodic));
}

DesignDomain DesignDomain::box(int p, double lower, double upper) {
  return DesignDomain(std::vector<double>(p, lower), std::vector<double>(p, upper),
                      std::vector<Boundary>(p, Boundary::Clamp));
}

bool DesignDomain::contains(const DesignPoint& point) const {
  if (point.size() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    const double x = point[k];
    if (!std::isfinite(x) || x < lower_[k]) return false;
    if (modes_[k] == Boundary::Periodic ? x >= upper_[k] : x > upper_[k]) return false;
  }
  return true;
}

double DesignDomain::axis_separation(int k, double a, double b) const {
  double gap = std::abs(a - b);
  if (modes_[k] == Boundary::Periodic) {
    gap = std::fmod(gap, extent(k));
    gap = std::min(gap, extent(k) - gap);
  }
  return gap;
}

double DesignDomain::squared_distance(const DesignPoint& a, const DesignPoint& b) const {
  double sum = 0.0;
  for (int k = 0; k < dim(); ++k) {
    const double g = axis_separation(k, a[k], b[k]);
    sum += g * g;
  }
  return sum;
}

bool DesignDomain::is_angle_torus() const {
  if (dim() != 2) return false;
  for (int k = 0; k < 2; ++k) {
    if (modes_[k] != Boundary::Periodic) return false;
    if (std::abs(extent(k) - 2.0 * std::numbers::pi) > 1e-12) return false;
  }
  return true;
}

DesignPoint domain_project(const DesignDomain& domain, const DesignPoint& point) {
  if (point.size() != domain.dim()) {
    throw Error("domain_project: point dimension does not match the domain");
  }
  DesignPoint out(point.size());
  for (int k = 0; k < domain.dim(); ++k) {
    const double x = point[k];
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "non-finite coordinate on axis " << k;
      throw NonFiniteCoordinate(msg.str());
    }
    const double lo = domain.lower(k);
    const double hi = domain.upper(k);
    if (domain.mode(k) == Boundary::Clamp) {
      out[k] = std::clamp(x, lo, hi);
      continue;
    }
    if (x >= lo && x < hi) {
      out[k] = x;
      continue;
    }
    const double len = hi - lo;
    double y = x - len * std::floor((x - lo) / len);
    // floor() can land exactly on the upper edge for tiny negative offsets.
    if (y >= hi) y -= len;
    if (y < lo) y = lo;
    out[k] = y;
  }
  return out;
}

ParticleEnsemble::ParticleEnsemble(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1 || coords_.cols() < 1) {
    throw Error("ParticleEnsemble: needs at least one particle of positive dimension");
  }
}

bool ParticleEnsemble::within(const DesignDomain& domain) const {
  if (dim() != domain.dim()) return false;
  for (int i = 0; i < size(); ++i) {
    if (!domain.contains((*this)[i])) return false;
  }
  return true;
}

SpdFactor::SpdFactor(const Eigen::MatrixXd& m) : llt_(m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw SingularInformationMatrix("information matrix must be square and non-empty");
  }
  if (llt_.info() != Eigen::Success) {
    throw SingularInformationMatrix(
        "information matrix has a non-positive pivot; the design does not span R^d");
  }
  const double rcond = llt_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition_ < kSingularConditionLimit)) {
    std::ostringstream msg;
    msg << "information matrix condition estimate " << condition_ << " exceeds "
        << kSingularConditionLimit;
    throw SingularInformationMatrix(msg.str());
  }
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

Eigen::VectorXd SpdFactor::solve_squared(const Eigen::VectorXd& b) const {
  return llt_.solve(llt_.solve(b));
}

Eigen::VectorXd SpdFactor::half_solve(const Eigen::VectorXd& b) const {
  return llt_.matrixL().solve(b);
}

double SpdFactor::trace_inverse() const {
  // Tr(M^-1) = ||L^-1||_F^2
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(dim(), dim());
  llt_.matrixL().solveInPlace(linv);
  return linv.squaredNorm();
}

double SpdFactor::log_det() const {
  const auto l = llt_.matrixLLT();
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Eigen::MatrixXd evaluate_rows(const ExperimentModel& model, const ParticleEnsemble& ensemble) {
  Eigen::MatrixXd rows(ensemble.size(), model.row_dim());
  parallel_for(ensemble.size(), [&](int i) { rows.row(i) = model.row(ensemble[i]).transpose(); });
  return rows;
}

InformationMatrix information_from_rows(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      const double ac = rows(i, c);
      for (int r = c; r < d; ++r) m(r, c) += rows(i, r) * ac;
    }
  }
  m /= static_cast<double>(n);
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return {0.5 * (m + m.transpose())};
}

InformationMatrix assemble_information_matrix(const ExperimentModel& model,
                                              const ParticleEnsemble& ensemble) {
  return information_from_rows(evaluate_rows(model, ensemble));
}

SpdFactor factorize(const InformationMatrix& info) { return SpdFactor(info.m); }

}  // namespace oedflow
