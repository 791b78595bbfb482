#include <cmath>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "solver_common.hpp"

namespace l1pt {

RecoveryOutcome omp_solve(const ProblemInstance& instance, int k) {
  instance.validate();
  const int m = instance.rows();
  const int n = instance.cols();
  if (k < 1 || k > m) {
    throw DomainError(fmt::format("omp_solve: need 1 <= k <= m={}, got k={}", m, k));
  }
  const Eigen::MatrixXd& a = instance.matrix;
  const Eigen::VectorXd& y = instance.measurements;
  const double y_norm = y.norm();

  RecoveryOutcome out;
  out.estimate = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd residual = y;
  std::vector<char> selected(static_cast<std::size_t>(n), 0);

  for (int step = 0; step < k; ++step) {
    if (residual.norm() <= 1e-12 * y_norm || y_norm == 0.0) break;
    const Eigen::VectorXd corr = a.transpose() * residual;
    int best = -1;
    double best_mag = -1.0;
    for (int j = 0; j < n; ++j) {
      // strict '>' keeps the lowest index on ties
      if (!selected[static_cast<std::size_t>(j)] && std::abs(corr[j]) > best_mag) {
        best_mag = std::abs(corr[j]);
        best = j;
      }
    }
    selected[static_cast<std::size_t>(best)] = 1;
    out.support.push_back(best);

    const Eigen::MatrixXd a_s = detail::gather_columns(a, out.support);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_s);
    if (qr.rank() < static_cast<Eigen::Index>(out.support.size())) {
      throw NumericalError(
          fmt::format("omp_solve: singular least-squares subproblem on support {{{}}}",
                      fmt::join(out.support, ", ")));
    }
    const Eigen::VectorXd coef = qr.solve(y);
    residual = y - a_s * coef;
    out.estimate.setZero();
    for (std::size_t j = 0; j < out.support.size(); ++j) {
      out.estimate[out.support[j]] = coef[static_cast<Eigen::Index>(j)];
    }
    out.iterations = step + 1;
  }
  detail::finalize_outcome(out, instance);
  out.converged = out.residual_norm <= 1e-9 * std::max(y_norm, 1.0);
  return out;
}

}  // namespace l1pt
