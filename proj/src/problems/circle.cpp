#include "oedflow/problems/circle.hpp"

#include <cmath>
#include <numbers>

namespace oedflow {

CircleModel::CircleModel() : domain_(DesignDomain::torus(1, 2.0 * std::numbers::pi)) {}

Eigen::VectorXd CircleModel::row(const DesignPoint& theta) const {
  return Eigen::Vector2d(std::cos(theta[0]), std::sin(theta[0]));
}

Eigen::MatrixXd CircleModel::row_jacobian(const DesignPoint& theta) const {
  Eigen::MatrixXd j(2, 1);
  j << -std::sin(theta[0]), std::cos(theta[0]);
  return j;
}

}  // namespace oedflow
