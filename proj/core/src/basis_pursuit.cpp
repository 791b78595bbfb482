#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "solver_common.hpp"

namespace l1pt {

namespace {

// Affine geometry of {x : Ax = y} from a pivoted QR of Aᵀ: AᵀP = QR.
class AffineSet {
 public:
  AffineSet(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    const auto m = a.rows();
    const auto n = a.cols();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
    if (qr.rank() < m) {
      throw NumericalError(
          fmt::format("basis_pursuit: matrix is rank deficient (rank {} < m={})", qr.rank(), m));
    }
    q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    r_ = qr.matrixR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    perm_ = qr.colsPermutation();
    const Eigen::VectorXd py = perm_.transpose() * y;
    c_ = r_.transpose().triangularView<Eigen::Lower>().solve(py);
  }

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    return v - q_ * (q_.transpose() * v - c_);
  }

  /// ν with Aᵀν closest to w.
  Eigen::VectorXd dual_from(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd t = r_.triangularView<Eigen::Upper>().solve(q_.transpose() * w);
    return perm_ * t;
  }

 private:
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> perm_;
  Eigen::VectorXd c_;
};

std::vector<int> support_of(const Eigen::VectorXd& z) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] != 0.0) s.push_back(static_cast<int>(i));
  }
  return s;
}

// Least squares on the support detected by ADMM; accepted only with a
// dual certificate.
std::optional<Eigen::VectorXd> polish(const ProblemInstance& instance, const Eigen::VectorXd& z,
                                      const std::vector<int>& support, const Eigen::VectorXd& nu,
                                      double feas_bound) {
  if (support.empty() || static_cast<int>(support.size()) > instance.rows()) return std::nullopt;
  const Eigen::MatrixXd a_s = detail::gather_columns(instance.matrix, support);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_s);
  if (qr.rank() < static_cast<Eigen::Index>(support.size())) return std::nullopt;
  const Eigen::VectorXd coef = qr.solve(instance.measurements);
  if ((a_s * coef - instance.measurements).norm() > feas_bound) return std::nullopt;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(instance.cols());
  for (std::size_t j = 0; j < support.size(); ++j) {
    const double v = coef[static_cast<Eigen::Index>(j)];
    if ((v > 0.0) != (z[support[j]] > 0.0) || v == 0.0) return std::nullopt;
    x[support[j]] = v;
  }
  CertifyOptions copts;
  copts.max_projection_iter = 50;
  if (!certify_l1_optimality(instance, x, copts, &nu)) return std::nullopt;
  return x;
}

}  // namespace

RecoveryOutcome basis_pursuit_solve(const ProblemInstance& instance, const SolverOptions& options) {
  instance.validate();
  options.validate();

  const auto n = instance.cols();
  const double y_norm = instance.measurements.norm();
  const double feas_bound = options.feas_tol * std::max(y_norm, 1.0);
  const AffineSet affine(instance.matrix, instance.measurements);

  RecoveryOutcome out;
  if (y_norm == 0.0) {
    out.estimate = Eigen::VectorXd::Zero(n);
    out.converged = true;
    if (options.certify) out.certified_optimal = true;
    detail::finalize_outcome(out, instance);
    return out;
  }

  // ADMM on ‖z‖₁ + indicator{Ax = y}(x), x = z, scaled dual u.
  Eigen::VectorXd x = affine.project(Eigen::VectorXd::Zero(n));
  double rho = 1.0 / std::max(0.1 * x.lpNorm<Eigen::Infinity>(), 1e-12);
  Eigen::VectorXd z = x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  std::vector<int> support;
  std::vector<int> tried;
  int stable_for = 0;
  int since_polish = 0;

  for (int it = 1; it <= options.max_iter; ++it) {
    x = affine.project(z - u);
    const Eigen::VectorXd z_prev = z;
    z = soft_threshold(x + u, 1.0 / rho);
    u += x - z;
    out.iterations = it;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_prev).norm();
    const double change = (z - z_prev).norm() / std::max(z.norm(), 1.0);

    std::vector<int> next_support = support_of(z);
    stable_for = (next_support == support) ? stable_for + 1 : 0;
    support = std::move(next_support);
    ++since_polish;
    if ((stable_for >= 5 && support != tried) || since_polish >= 200) {
      tried = support;
      since_polish = 0;
      const Eigen::VectorXd nu = affine.dual_from(rho * u);
      if (auto polished = polish(instance, z, support, nu, feas_bound)) {
        out.estimate = std::move(*polished);
        out.converged = true;
        out.certified_optimal = true;
        detail::finalize_outcome(out, instance);
        return out;
      }
    }

    if (primal <= feas_bound && change <= options.conv_tol) {
      out.converged = true;
      break;
    }
    if (it % 10 == 0) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u *= 0.5;
      } else if (dual > 10.0 * primal) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }
  if (!out.converged) {
    throw ConvergenceError(
        fmt::format("basis_pursuit: no convergence after {} iterations", options.max_iter),
        x.lpNorm<1>());
  }
  out.estimate = x;
  if (options.certify) {
    const Eigen::VectorXd nu = affine.dual_from(rho * u);
    CertifyOptions copts;
    out.certified_optimal = certify_l1_optimality(instance, out.estimate, copts, &nu);
  }
  detail::finalize_outcome(out, instance);
  return out;
}

}  // namespace l1pt
