#pragma once

#include <Eigen/Dense>

namespace galcon::detail {

// min/max |U_ii| of a computed partial-pivot LU; 0 for an exactly singular
// factor. Used as the conditioning guard everywhere a coefficient matrix is
// inverted (threshold 1e-12).
inline double lu_pivot_ratio(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  if (!(pmax > 0.0)) return 0.0;
  return pivots.minCoeff() / pmax;
}

inline bool lu_singular(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, double tol = 1e-12) {
  return !(lu_pivot_ratio(lu) > tol);
}

}  // namespace galcon::detail
