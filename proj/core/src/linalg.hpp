#pragma once

#include <Eigen/Dense>

namespace mixlens::detail {

/// Solves the symmetric positive semi-definite system a x = b with LDLT.
/// When the pivots show `a` is numerically singular, returns the
/// minimum-norm solution instead and sets `degenerate`.
Eigen::VectorXd solve_symmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                bool& degenerate);

}  // namespace mixlens::detail
