#ifndef L1PT_RECOVERY_SOLVERS_HPP
#define L1PT_RECOVERY_SOLVERS_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace l1pt {

/// y = A x̃ with A of size m×n, m ≤ n. `truth` and `sparsity` are known for
/// planted instances only.
struct ProblemInstance {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd measurements;
  std::optional<Eigen::VectorXd> truth;
  std::optional<int> sparsity;
  std::optional<std::uint64_t> seed;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
  double alpha() const { return static_cast<double>(rows()) / cols(); }
  std::optional<double> beta() const;

  /// Builds y = A x̃ and records k = nnz(x̃).
  static ProblemInstance planted(Eigen::MatrixXd matrix, Eigen::VectorXd truth);

  /// Throws SpecError on inconsistent dimensions, m > n, y != A x̃, or a
  /// truth whose nonzero count differs from `sparsity`.
  void validate() const;
};

struct SolverOptions {
  int max_iter = 50000;
  double conv_tol = 1e-10;  ///< relative change between iterates
  double feas_tol = 1e-9;   ///< ‖Ax − y‖ ≤ feas_tol · max(‖y‖, 1)
  /// AMP threshold τ_t = multiplier · ‖z_t‖/√m. Defaults to the state
  /// evolution maximizer z*(α).
  std::optional<double> threshold_multiplier;
  bool certify = false;

  void validate() const;
};

struct RecoveryOutcome {
  Eigen::VectorXd estimate;
  int iterations = 0;
  double residual_norm = 0.0;      ///< ‖A x̂ − y‖₂
  std::optional<double> rel_error; ///< ‖x̂ − x̃‖₂ / ‖x̃‖₂ (absolute when x̃ = 0)
  bool converged = false;
  std::optional<bool> certified_optimal;
  std::vector<int> support;        ///< OMP selection order
};

enum class SolverKind { Amp, BasisPursuit, Omp };

std::string_view to_string(SolverKind kind);
/// Accepts "amp", "bp", "omp".
SolverKind solver_from_string(std::string_view name);

/// η(v; τ) = sign(v)·max(|v| − τ, 0), componentwise.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

/// Fraction of components with |v_i| > τ, the mean of η′(v; τ).
double avg_threshold_derivative(const Eigen::VectorXd& v, double tau);

/// Approximate message passing with soft thresholding and the Onsager
/// correction. A and y are rescaled by 1/√m internally so that columns have
/// unit expected norm; the estimate is in the caller's scale.
RecoveryOutcome amp_solve(const ProblemInstance& instance, const SolverOptions& options = {});

/// min ‖x‖₁ subject to Ax = y.
RecoveryOutcome basis_pursuit_solve(const ProblemInstance& instance,
                                    const SolverOptions& options = {});

/// Orthogonal matching pursuit for at most k atoms.
RecoveryOutcome omp_solve(const ProblemInstance& instance, int k);

struct OracleSolution {
  Eigen::VectorXd x;
  bool unique = true;
};

/// Exhaustive ℓ1 minimizer over basic solutions; only for n ≤ 16, m ≤ 8.
OracleSolution l1_oracle_bruteforce(const ProblemInstance& instance);

struct CertifyOptions {
  double slack = 1e-9;      ///< allowed excess over 1 off the support
  double feas_tol = 1e-6;   ///< precondition ‖Ax̂ − y‖ ≤ feas_tol · max(‖y‖, 1)
  double zero_tol = 1e-9;   ///< |x̂_i| ≤ zero_tol · max(‖x̂‖∞, 1) counts as zero
  int max_projection_iter = 500;
};

/// Searches for a dual certificate ν with (Aᵀν)_i = sign(x̂_i) on the support
/// and |(Aᵀν)_i| ≤ 1 elsewhere. `true` proves optimality; `false` only means
/// no certificate was found. `dual_hint` seeds the search.
bool certify_l1_optimality(const ProblemInstance& instance, const Eigen::VectorXd& x_hat,
                           const CertifyOptions& options,
                           const Eigen::VectorXd* dual_hint = nullptr);

bool certify_l1_optimality(const ProblemInstance& instance, const Eigen::VectorXd& x_hat,
                           double tol = 1e-9);

}  // namespace l1pt

#endif  // L1PT_RECOVERY_SOLVERS_HPP
