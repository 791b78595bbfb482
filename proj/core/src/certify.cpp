#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "solver_common.hpp"

namespace l1pt {

namespace {

struct SupportSplit {
  std::vector<int> on;
  std::vector<int> off;
  Eigen::VectorXd signs;
};

SupportSplit split_support(const Eigen::VectorXd& x, double zero_tol) {
  SupportSplit split;
  const double cutoff = zero_tol * std::max(x.lpNorm<Eigen::Infinity>(), 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    (std::abs(x[i]) > cutoff ? split.on : split.off).push_back(static_cast<int>(i));
  }
  split.signs.resize(static_cast<Eigen::Index>(split.on.size()));
  for (std::size_t j = 0; j < split.on.size(); ++j) {
    split.signs[static_cast<Eigen::Index>(j)] = x[split.on[j]] > 0.0 ? 1.0 : -1.0;
  }
  return split;
}

class CertificateSearch {
 public:
  CertificateSearch(const Eigen::MatrixXd& a, const SupportSplit& split, double slack)
      : a_on_(detail::gather_columns(a, split.on)),
        a_off_(detail::gather_columns(a, split.off)),
        signs_(split.signs),
        slack_(slack),
        support_eq_(a_on_.transpose()) {}

  // Minimal-norm correction of ν onto {A_Sᵀν = s}; false if that set is empty.
  bool correct(Eigen::VectorXd& nu) const {
    if (a_on_.cols() == 0) return true;
    const Eigen::VectorXd gap = signs_ - a_on_.transpose() * nu;
    nu += support_eq_.solve(gap);
    return (a_on_.transpose() * nu - signs_).lpNorm<Eigen::Infinity>() <= slack_;
  }

  bool off_support_ok(const Eigen::VectorXd& nu) const {
    if (a_off_.cols() == 0) return true;
    return (a_off_.transpose() * nu).lpNorm<Eigen::Infinity>() <= 1.0 + slack_;
  }

  // ADMM (Douglas-Rachford) in (ν, w) between the affine set
  // {A_Sᵀν = s, w = A_offᵀν} and the box |w| ≤ 1.
  bool project_search(Eigen::VectorXd nu, int max_iter) const {
    const auto m = a_on_.rows();
    const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(m, m) + a_off_ * a_off_.transpose();
    const Eigen::LLT<Eigen::MatrixXd> k_llt(k);
    if (k_llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd kinv_on = k_llt.solve(a_on_);
    const Eigen::MatrixXd schur = a_on_.transpose() * kinv_on;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> schur_cod(schur);

    // orthogonal projection of (ν̃, w̃) onto the affine set; returns ν
    auto project = [&](const Eigen::VectorXd& nu_t, const Eigen::VectorXd& w_t) {
      const Eigen::VectorXd base = k_llt.solve(nu_t + a_off_ * w_t);
      if (a_on_.cols() == 0) return base;
      const Eigen::VectorXd lambda = schur_cod.solve(a_on_.transpose() * base - signs_);
      return Eigen::VectorXd(base - kinv_on * lambda);
    };

    // the box leaves ν free, so only the w block carries a dual
    Eigen::VectorXd v_w = (a_off_.transpose() * nu).cwiseMax(-1.0).cwiseMin(1.0);
    Eigen::VectorXd d_w = Eigen::VectorXd::Zero(a_off_.cols());
    for (int it = 0; it < max_iter; ++it) {
      nu = project(nu, v_w - d_w);
      const Eigen::VectorXd w = a_off_.transpose() * nu;
      if (off_support_ok(nu) &&
          (a_on_.cols() == 0 ||
           (a_on_.transpose() * nu - signs_).lpNorm<Eigen::Infinity>() <= slack_)) {
        return true;
      }
      v_w = (w + d_w).cwiseMax(-1.0).cwiseMin(1.0);
      d_w += w - v_w;
    }
    return false;
  }

 private:
  Eigen::MatrixXd a_on_;
  Eigen::MatrixXd a_off_;
  Eigen::VectorXd signs_;
  double slack_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> support_eq_;
};

}  // namespace

bool certify_l1_optimality(const ProblemInstance& instance, const Eigen::VectorXd& x_hat,
                           const CertifyOptions& options, const Eigen::VectorXd* dual_hint) {
  instance.validate();
  if (x_hat.size() != instance.cols()) {
    throw DomainError(fmt::format("certify: x_hat has {} entries, expected {}", x_hat.size(),
                                  instance.cols()));
  }
  const double y_norm = instance.measurements.norm();
  const double infeasibility = (instance.matrix * x_hat - instance.measurements).norm();
  if (infeasibility > options.feas_tol * std::max(y_norm, 1.0)) {
    throw DomainError(fmt::format("certify: x_hat infeasible, ‖Ax − y‖ = {}", infeasibility));
  }

  const SupportSplit split = split_support(x_hat, options.zero_tol);
  if (split.on.empty()) return true;  // ν = 0
  if (static_cast<int>(split.on.size()) > instance.rows()) return false;

  const CertificateSearch search(instance.matrix, split, options.slack);

  Eigen::VectorXd nu = Eigen::VectorXd::Zero(instance.rows());
  if (!search.correct(nu)) return false;
  if (search.off_support_ok(nu)) return true;
  Eigen::VectorXd start = nu;

  if (dual_hint != nullptr && dual_hint->size() == instance.rows()) {
    Eigen::VectorXd hinted = *dual_hint;
    if (search.correct(hinted)) {
      if (search.off_support_ok(hinted)) return true;
      start = hinted;
    }
  }
  return search.project_search(start, options.max_projection_iter);
}

bool certify_l1_optimality(const ProblemInstance& instance, const Eigen::VectorXd& x_hat,
                           double tol) {
  CertifyOptions options;
  options.slack = tol;
  return certify_l1_optimality(instance, x_hat, options);
}

}  // namespace l1pt
