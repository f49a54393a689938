#include "linalg.hpp"

#include <algorithm>

namespace mixlens::detail {

Eigen::VectorXd solve_symmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                bool& degenerate) {
  degenerate = false;
  if (a.rows() == 0) return Eigen::VectorXd();
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  bool ok = ldlt.info() == Eigen::Success && ldlt.isPositive();
  if (ok) ok = ldlt.vectorD().cwiseAbs().minCoeff() > 1e-10 * scale;
  if (ok) return ldlt.solve(b);

  degenerate = true;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(a);
  return cod.solve(b);
}

}  // namespace mixlens::detail
