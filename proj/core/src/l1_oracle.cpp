#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "solver_common.hpp"

namespace l1pt {

namespace {

constexpr int kMaxCols = 16;
constexpr int kMaxRows = 8;
constexpr double kTie = 1e-9;

// Advances `idx` to the next m-subset of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  const int m = static_cast<int>(idx.size());
  int i = m - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace

OracleSolution l1_oracle_bruteforce(const ProblemInstance& instance) {
  instance.validate();
  const int m = instance.rows();
  const int n = instance.cols();
  if (n > kMaxCols || m > kMaxRows) {
    throw DomainError(fmt::format(
        "l1_oracle_bruteforce: refusing {}x{} instance (limit {}x{})", m, n, kMaxRows, kMaxCols));
  }
  const Eigen::VectorXd& y = instance.measurements;
  const double feas_bound = 1e-9 * std::max(y.norm(), 1.0);

  OracleSolution best;
  double best_l1 = std::numeric_limits<double>::infinity();
  bool found = false;

  std::vector<int> cols(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) cols[static_cast<std::size_t>(j)] = j;
  do {
    const Eigen::MatrixXd basis = detail::gather_columns(instance.matrix, cols);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd coef = lu.solve(y);
    if ((basis * coef - y).norm() > feas_bound) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < m; ++j) x[cols[static_cast<std::size_t>(j)]] = coef[j];
    const double l1 = x.lpNorm<1>();

    if (!found || l1 < best_l1 - kTie) {
      best.x = std::move(x);
      best.unique = true;
      best_l1 = l1;
      found = true;
    } else if (std::abs(l1 - best_l1) <= kTie) {
      // Supports sharing a sparser point give the same vector, not a tie.
      if ((x - best.x).lpNorm<Eigen::Infinity>() > kTie) best.unique = false;
      if (l1 < best_l1) {
        best.x = std::move(x);
        best_l1 = l1;
      }
    }
  } while (next_combination(cols, n));

  if (!found) {
    throw NumericalError("l1_oracle_bruteforce: no invertible m-column basis");
  }
  return best;
}

}  // namespace l1pt
