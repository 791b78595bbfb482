#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"

namespace l1pt {

std::optional<double> ProblemInstance::beta() const {
  if (!sparsity) return std::nullopt;
  return static_cast<double>(*sparsity) / cols();
}

ProblemInstance ProblemInstance::planted(Eigen::MatrixXd matrix, Eigen::VectorXd truth) {
  if (matrix.cols() != truth.size()) {
    throw SpecError(fmt::format("planted: matrix has {} columns but truth has {} entries",
                                matrix.cols(), truth.size()));
  }
  ProblemInstance out;
  out.measurements = matrix * truth;
  out.matrix = std::move(matrix);
  out.sparsity = static_cast<int>((truth.array() != 0.0).count());
  out.truth = std::move(truth);
  return out;
}

void ProblemInstance::validate() const {
  const auto m = matrix.rows();
  const auto n = matrix.cols();
  if (m < 1 || n < 1) throw SpecError("instance: empty matrix");
  if (m > n) throw SpecError(fmt::format("instance: m={} exceeds n={}", m, n));
  if (measurements.size() != m) {
    throw SpecError(fmt::format("instance: y has {} entries, expected {}", measurements.size(), m));
  }
  if (!matrix.allFinite() || !measurements.allFinite()) {
    throw SpecError("instance: non-finite entries");
  }
  if (truth) {
    if (truth->size() != n) {
      throw SpecError(fmt::format("instance: truth has {} entries, expected {}", truth->size(), n));
    }
    const double mismatch = (matrix * *truth - measurements).norm();
    if (mismatch > 1e-10 * std::max(measurements.norm(), 1.0)) {
      throw SpecError(fmt::format("instance: ‖A x_true − y‖ = {} is not ~0", mismatch));
    }
    if (sparsity) {
      const auto nnz = (truth->array() != 0.0).count();
      if (nnz != *sparsity) {
        throw SpecError(fmt::format("instance: truth has {} nonzeros, k={}", nnz, *sparsity));
      }
    }
  }
  if (sparsity && (*sparsity < 0 || *sparsity > n)) {
    throw SpecError(fmt::format("instance: sparsity {} out of range", *sparsity));
  }
}

void SolverOptions::validate() const {
  if (max_iter < 1 || !(conv_tol > 0.0) || !(feas_tol > 0.0)) {
    throw DomainError(fmt::format("solver options: max_iter={} conv_tol={} feas_tol={}", max_iter,
                                  conv_tol, feas_tol));
  }
  if (threshold_multiplier && !(*threshold_multiplier >= 0.0)) {
    throw DomainError(
        fmt::format("solver options: threshold_multiplier must be >= 0, got {}", *threshold_multiplier));
  }
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Amp:
      return "amp";
    case SolverKind::BasisPursuit:
      return "bp";
    case SolverKind::Omp:
      return "omp";
  }
  return "unknown";
}

SolverKind solver_from_string(std::string_view name) {
  if (name == "amp") return SolverKind::Amp;
  if (name == "bp") return SolverKind::BasisPursuit;
  if (name == "omp") return SolverKind::Omp;
  throw DomainError(fmt::format("unknown solver '{}'", name));
}

}  // namespace l1pt
