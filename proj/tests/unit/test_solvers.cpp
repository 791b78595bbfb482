#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"
#include "l1pt/recovery_solvers.hpp"

using namespace l1pt;

namespace {

ProblemInstance gaussian_instance(int m, int n, int k, std::uint64_t seed) {
  return sample_planted(n, m, k, NonzeroLaw::StandardNormal, seed);
}

}  // namespace

TEST(SoftThreshold, Componentwise) {
  Eigen::VectorXd v(5);
  v << -3.0, -0.5, 0.0, 0.5, 2.0;
  const Eigen::VectorXd r = soft_threshold(v, 1.0);
  EXPECT_EQ(r[0], -2.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[2], 0.0);
  EXPECT_EQ(r[3], 0.0);
  EXPECT_EQ(r[4], 1.0);
  EXPECT_DOUBLE_EQ(avg_threshold_derivative(v, 1.0), 0.4);
  EXPECT_EQ(soft_threshold(v, 0.0), v);
  EXPECT_THROW(soft_threshold(v, -1.0), DomainError);
}

TEST(ProblemInstance, Validation) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 2);
  ProblemInstance bad;
  bad.matrix = a;
  bad.measurements = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(bad.validate(), SpecError);  // m > n

  auto inst = gaussian_instance(4, 8, 2, 1);
  inst.measurements[0] += 1.0;
  EXPECT_THROW(inst.validate(), SpecError);  // y != A x̃

  auto wrong_k = gaussian_instance(4, 8, 2, 1);
  wrong_k.sparsity = 3;
  EXPECT_THROW(wrong_k.validate(), SpecError);
}

TEST(Omp, RecoversSparseVector) {
  const auto inst = gaussian_instance(40, 80, 5, 2);
  const auto r = omp_solve(inst, 5);
  ASSERT_TRUE(r.rel_error.has_value());
  EXPECT_LT(*r.rel_error, 1e-10);
  EXPECT_EQ(r.support.size(), 5u);
  EXPECT_TRUE(r.converged);
}

TEST(Omp, TiesGoToLowestIndex) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 1, 0,
       0, 0, 1;
  ProblemInstance inst;
  inst.matrix = a;
  inst.measurements = Eigen::Vector2d(1.0, 0.0);
  const auto r = omp_solve(inst, 1);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], 0);
}

TEST(Omp, StopsEarlyOnExactFit) {
  const auto inst = gaussian_instance(20, 40, 2, 3);
  const auto r = omp_solve(inst, 10);
  EXPECT_EQ(r.support.size(), 2u);
}

TEST(Omp, Errors) {
  const auto inst = gaussian_instance(4, 8, 2, 4);
  EXPECT_THROW(omp_solve(inst, 0), DomainError);
  EXPECT_THROW(omp_solve(inst, 5), DomainError);

  Eigen::MatrixXd a(2, 3);
  a << 1, 1, 1,
       0, 0, 0;
  ProblemInstance degenerate;
  degenerate.matrix = a;
  degenerate.measurements = Eigen::Vector2d(1.0, 1.0);
  try {
    omp_solve(degenerate, 2);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("{0, 1}"), std::string::npos) << e.what();
  }
}

TEST(Oracle, RefusesLargeInstances) {
  EXPECT_THROW(l1_oracle_bruteforce(gaussian_instance(6, 17, 1, 5)), DomainError);
  EXPECT_THROW(l1_oracle_bruteforce(gaussian_instance(9, 16, 1, 5)), DomainError);
}

TEST(Oracle, FlagsTies) {
  ProblemInstance inst;
  inst.matrix = Eigen::MatrixXd::Ones(1, 2);
  inst.measurements = Eigen::VectorXd::Ones(1);
  const auto sol = l1_oracle_bruteforce(inst);
  EXPECT_FALSE(sol.unique);
  EXPECT_NEAR(sol.x.lpNorm<1>(), 1.0, 1e-15);
}

TEST(Oracle, UniqueMinimumIsSparsePlant) {
  const auto inst = gaussian_instance(6, 12, 1, 6);
  const auto sol = l1_oracle_bruteforce(inst);
  EXPECT_TRUE(sol.unique);
  EXPECT_LT((sol.x - *inst.truth).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Oracle, BeatsRandomFeasiblePoints) {
  const auto inst = gaussian_instance(5, 10, 3, 7);
  const auto sol = l1_oracle_bruteforce(inst);
  const Eigen::MatrixXd& a = inst.matrix;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd null = lu.kernel();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 2000; ++t) {
    Eigen::VectorXd c(null.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = g(rng);
    const Eigen::VectorXd x = sol.x + 0.3 * null * c;
    EXPECT_GE(x.lpNorm<1>(), sol.x.lpNorm<1>() - 1e-12);
  }
}

TEST(BasisPursuit, MatchesOracleAndCertifies) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = gaussian_instance(6, 12, 1 + static_cast<int>(seed % 3), 100 + seed);
    const auto sol = l1_oracle_bruteforce(inst);
    SolverOptions opts;
    opts.certify = true;
    const auto r = basis_pursuit_solve(inst, opts);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.residual_norm, 1e-8);
    if (!sol.unique) continue;
    ++compared;
    EXPECT_LE((r.estimate - sol.x).lpNorm<Eigen::Infinity>(), 1e-6) << "seed " << seed;
    EXPECT_TRUE(r.certified_optimal.value_or(false)) << "seed " << seed;
  }
  EXPECT_GT(compared, 20);
}

TEST(BasisPursuit, ZeroMeasurements) {
  const auto inst = gaussian_instance(5, 10, 0, 8);
  const auto r = basis_pursuit_solve(inst);
  EXPECT_EQ(r.estimate.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(BasisPursuit, RankDeficientMatrix) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 2, 3,
       2, 4, 6;
  ProblemInstance inst;
  inst.matrix = a;
  inst.measurements = Eigen::Vector2d(1, 2);
  EXPECT_THROW(basis_pursuit_solve(inst), NumericalError);
}

TEST(BasisPursuit, RecoversBelowThreshold) {
  const auto inst = gaussian_instance(100, 200, 15, 9);
  const auto r = basis_pursuit_solve(inst);
  EXPECT_LT(*r.rel_error, 1e-8);
}

TEST(BasisPursuit, AboveThresholdStillOptimal) {
  // recovery fails but the returned point must be an ℓ1 minimizer
  const auto inst = gaussian_instance(50, 100, 30, 10);
  SolverOptions opts;
  opts.certify = true;
  const auto r = basis_pursuit_solve(inst, opts);
  EXPECT_GT(*r.rel_error, 1e-2);
  EXPECT_TRUE(r.certified_optimal.value_or(false));
  EXPECT_LE(r.estimate.lpNorm<1>(), inst.truth->lpNorm<1>() + 1e-9);
}

TEST(Certify, AcceptsPlantAndRejectsDensePoint) {
  const auto inst = gaussian_instance(40, 80, 4, 11);
  EXPECT_TRUE(certify_l1_optimality(inst, *inst.truth));
  // minimum-norm solution is dense, so not ℓ1 optimal
  const Eigen::VectorXd dense =
      inst.matrix.transpose() * (inst.matrix * inst.matrix.transpose()).ldlt().solve(inst.measurements);
  EXPECT_FALSE(certify_l1_optimality(inst, dense));
  EXPECT_THROW(certify_l1_optimality(inst, Eigen::VectorXd::Zero(80)), DomainError);
  EXPECT_THROW(certify_l1_optimality(inst, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST(Certify, RejectsSuboptimalSparsePoint) {
  // the sum of two supports reaching y is feasible but not the minimizer
  const auto inst = gaussian_instance(6, 12, 1, 12);
  const auto sol = l1_oracle_bruteforce(inst);
  ASSERT_TRUE(sol.unique);
  std::vector<int> cols;
  for (int c = 0; c < 12 && static_cast<int>(cols.size()) < 6; ++c) {
    if ((*inst.truth)[c] == 0.0) cols.push_back(c);
  }
  Eigen::MatrixXd basis(6, 6);
  for (int c = 0; c < 6; ++c) basis.col(c) = inst.matrix.col(cols[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd coef = basis.fullPivLu().solve(inst.measurements);
  Eigen::VectorXd other = Eigen::VectorXd::Zero(12);
  for (int c = 0; c < 6; ++c) other[cols[static_cast<std::size_t>(c)]] = coef[c];
  EXPECT_FALSE(certify_l1_optimality(inst, other));
}

TEST(Amp, RecoversEasyInstance) {
  const auto inst = gaussian_instance(250, 500, 20, 13);
  const auto r = amp_solve(inst);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(*r.rel_error, 1e-6);
}

TEST(Amp, MultiplierOverride) {
  const auto inst = gaussian_instance(250, 500, 20, 13);
  SolverOptions opts;
  opts.threshold_multiplier = 1.3;
  const auto r = amp_solve(inst, opts);
  EXPECT_LT(*r.rel_error, 1e-6);
  opts.threshold_multiplier = -1.0;
  EXPECT_THROW(amp_solve(inst, opts), DomainError);
}

TEST(Amp, DivergenceIsReported) {
  // no shrinkage makes the Onsager term 1/α > 1 and the residual explodes
  const auto inst = gaussian_instance(100, 400, 30, 14);
  SolverOptions opts;
  opts.threshold_multiplier = 0.0;
  try {
    amp_solve(inst, opts);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(Amp, ZeroSignal) {
  const auto inst = gaussian_instance(50, 100, 0, 15);
  const auto r = amp_solve(inst);
  EXPECT_EQ(r.estimate.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(*r.rel_error, 0.0);
}

TEST(SolverKind, StringConversion) {
  for (const auto k : {SolverKind::Amp, SolverKind::BasisPursuit, SolverKind::Omp}) {
    EXPECT_EQ(solver_from_string(to_string(k)), k);
  }
  EXPECT_THROW(solver_from_string("lasso"), DomainError);
}
