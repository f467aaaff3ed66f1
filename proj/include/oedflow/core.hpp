#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <string>
#include <vector>

#include "oedflow/errors.hpp"

namespace oedflow {

/// A point in the design space. Its length is the design dimension p.
using DesignPoint = Eigen::VectorXd;

enum class Boundary { Periodic, Clamp };

/// Axis-aligned box with a boundary rule per axis. Periodic axes identify
/// `lower` with `upper`, so their points live in [lower, upper).
class DesignDomain {
 public:
  DesignDomain(std::vector<double> lower, std::vector<double> upper,
               std::vector<Boundary> modes);

  /// [0, period)^p with every axis periodic.
  static DesignDomain torus(int p, double period);
  /// [lower, upper]^p with every axis clamped.
  static DesignDomain box(int p, double lower, double upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  double lower(int k) const { return lower_[k]; }
  double upper(int k) const { return upper_[k]; }
  double extent(int k) const { return upper_[k] - lower_[k]; }
  Boundary mode(int k) const { return modes_[k]; }

  bool contains(const DesignPoint& point) const;

  /// Per-axis separation; circular on periodic axes.
  double axis_separation(int k, double a, double b) const;
  double squared_distance(const DesignPoint& a, const DesignPoint& b) const;

  /// True for a 2-torus of circumference 2*pi on both axes.
  bool is_angle_torus() const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Boundary> modes_;
};

/// Wraps periodic coordinates into [lower, upper) and clips clamped ones to
/// [lower, upper]. Throws NonFiniteCoordinate on NaN or Inf input.
DesignPoint domain_project(const DesignDomain& domain, const DesignPoint& point);

/// N equally weighted design points, stored as an N x p matrix.
class ParticleEnsemble {
 public:
  explicit ParticleEnsemble(Eigen::MatrixXd coords);

  int size() const { return static_cast<int>(coords_.rows()); }
  int dim() const { return static_cast<int>(coords_.cols()); }
  DesignPoint operator[](int i) const { return coords_.row(i).transpose(); }
  const Eigen::MatrixXd& coords() const { return coords_; }

  bool within(const DesignDomain& domain) const;

 private:
  Eigen::MatrixXd coords_;
};

/// A linear experiment indexed continuously by design points: each point
/// yields one row a(theta) in R^d of the data matrix.
///
/// Implementations must be immutable after construction; rows are queried
/// concurrently from worker threads.
class ExperimentModel {
 public:
  virtual ~ExperimentModel() = default;

  virtual std::string name() const = 0;
  virtual int row_dim() const = 0;
  virtual const DesignDomain& domain() const = 0;
  virtual Eigen::VectorXd row(const DesignPoint& theta) const = 0;
  /// d x p matrix of partial derivatives of row() with respect to theta.
  virtual Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const = 0;

  int design_dim() const { return domain().dim(); }
};

inline constexpr double kSingularConditionLimit = 1e12;

/// Cholesky factorization of a symmetric positive definite matrix.
class SpdFactor {
 public:
  /// Throws SingularInformationMatrix when a pivot is non-positive or the
  /// estimated condition number reaches kSingularConditionLimit.
  explicit SpdFactor(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(llt_.rows()); }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Solves M^2 x = b with two triangular-pair solves.
  Eigen::VectorXd solve_squared(const Eigen::VectorXd& b) const;
  /// Solves L y = b for the lower Cholesky factor L.
  Eigen::VectorXd half_solve(const Eigen::VectorXd& b) const;
  double trace_inverse() const;
  double log_det() const;
  double condition_estimate() const { return condition_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double condition_ = 0.0;
};

/// M = (1/N) sum_i a(theta_i)^T a(theta_i), exactly symmetric.
struct InformationMatrix {
  Eigen::MatrixXd m;
};

/// Rows of every particle, one row per particle (N x d). Evaluated in
/// parallel; the result does not depend on the worker count.
Eigen::MatrixXd evaluate_rows(const ExperimentModel& model,
                              const ParticleEnsemble& ensemble);

/// Averages outer products of the given rows in index order.
InformationMatrix information_from_rows(const Eigen::MatrixXd& rows);

InformationMatrix assemble_information_matrix(const ExperimentModel& model,
                                              const ParticleEnsemble& ensemble);

SpdFactor factorize(const InformationMatrix& info);

}  // namespace oedflow
