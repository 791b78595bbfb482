#ifndef L1PT_SRC_SOLVER_COMMON_HPP
#define L1PT_SRC_SOLVER_COMMON_HPP

#include "l1pt/recovery_solvers.hpp"

namespace l1pt::detail {

// Fills residual_norm and, when the truth is known, rel_error.
inline void finalize_outcome(RecoveryOutcome& out, const ProblemInstance& instance) {
  out.residual_norm = (instance.matrix * out.estimate - instance.measurements).norm();
  if (instance.truth) {
    const double scale = instance.truth->norm();
    const double err = (out.estimate - *instance.truth).norm();
    out.rel_error = scale > 0.0 ? err / scale : err;
  }
}

// Columns of `a` listed in `cols`, in order.
inline Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& a, const std::vector<int>& cols) {
  Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
  return out;
}

}  // namespace l1pt::detail

#endif  // L1PT_SRC_SOLVER_COMMON_HPP
