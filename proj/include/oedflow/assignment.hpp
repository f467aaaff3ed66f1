#pragma once

#include <Eigen/Core>

#include <vector>

namespace oedflow {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with row/column potentials, O(n^3)). Returns assignment[row] = column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace oedflow
