#pragma once

#include "oedflow/core.hpp"

namespace oedflow {

/// Rows a(theta) = (cos theta, sin theta) on the periodic circle [0, 2pi).
/// Every row is unit length and orthogonal to its own derivative, so any
/// equally spaced ensemble (N >= 3) gives M = I/2 and zero velocity.
class CircleModel final : public ExperimentModel {
 public:
  CircleModel();

  std::string name() const override { return "circle"; }
  int row_dim() const override { return 2; }
  const DesignDomain& domain() const override { return domain_; }
  Eigen::VectorXd row(const DesignPoint& theta) const override;
  Eigen::MatrixXd row_jacobian(const DesignPoint& theta) const override;

 private:
  DesignDomain domain_;
};

}  // namespace oedflow
