#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "l1pt/threshold_curves.hpp"
#include "solver_common.hpp"

namespace l1pt {

namespace {

constexpr int kDivergenceWindow = 50;
constexpr double kDivergenceFactor = 10.0;

}  // namespace

RecoveryOutcome amp_solve(const ProblemInstance& instance, const SolverOptions& options) {
  instance.validate();
  options.validate();

  const int m = instance.rows();
  const int n = instance.cols();
  const double alpha = instance.alpha();
  const double theta = options.threshold_multiplier
                           ? *options.threshold_multiplier
                           : beta_w_amp(alpha).z_star;

  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const Eigen::MatrixXd a = instance.matrix * scale;
  const Eigen::VectorXd y = instance.measurements * scale;
  const double y_norm = y.norm();
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  RecoveryOutcome out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = y;
  std::vector<double> trace;
  trace.reserve(std::min(options.max_iter, 4096));

  for (int t = 1; t <= options.max_iter; ++t) {
    const Eigen::VectorXd pseudo = a.transpose() * z + x;
    const double tau = theta * z.norm() * inv_sqrt_m;
    Eigen::VectorXd next = soft_threshold(pseudo, tau);
    const double onsager = avg_threshold_derivative(pseudo, tau) / alpha;
    const double change = (next - x).norm() / std::max(x.norm(), 1.0);
    x = std::move(next);
    z = y - a * x + onsager * z;
    out.iterations = t;

    const double residual = (y - a * x).norm();
    trace.push_back(residual);
    if (!std::isfinite(residual) || !x.allFinite()) {
      throw DivergenceError(fmt::format("amp_solve: non-finite iterate at t={}", t), trace);
    }
    if (t > kDivergenceWindow) {
      const double past = trace[trace.size() - 1 - kDivergenceWindow];
      if (residual > kDivergenceFactor * past && residual > 1e-6 * y_norm) {
        throw DivergenceError(
            fmt::format("amp_solve: residual grew from {} to {} over {} iterations", past, residual,
                        kDivergenceWindow),
            trace);
      }
    }
    if (change <= options.conv_tol) {
      out.converged = true;
      break;
    }
  }
  out.estimate = std::move(x);
  detail::finalize_outcome(out, instance);
  return out;
}

}  // namespace l1pt
