#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

using namespace l1pt;

namespace {

EnsembleSpec spec(int n, double alpha, double beta, std::uint64_t seed = 1) {
  EnsembleSpec s;
  s.n = n;
  s.alpha = alpha;
  s.beta = beta;
  s.master_seed = seed;
  return s;
}

bool same_cell(const PhaseCell& a, const PhaseCell& b) {
  return a.alpha == b.alpha && a.beta == b.beta && a.n == b.n && a.trials == b.trials &&
         a.successes == b.successes &&
         (a.mean_rel_error == b.mean_rel_error ||
          (std::isnan(a.mean_rel_error) && std::isnan(b.mean_rel_error)));
}

}  // namespace

TEST(Ensemble, SizesAndValidation) {
  const auto s = spec(1000, 0.5, 0.1);
  EXPECT_EQ(s.m(), 500);
  EXPECT_EQ(s.k(), 100);
  EXPECT_THROW(spec(100, 0.2, 0.3).validate(), SpecError);  // k > m
  EXPECT_THROW(spec(0, 0.5, 0.1).validate(), SpecError);
  EXPECT_THROW(spec(10, 0.01, 0.0).validate(), SpecError);  // m = 0
  EXPECT_THROW(sample_instance(spec(100, 0.2, 0.3), 0), SpecError);
}

TEST(Ensemble, ExactSparsityAndConsistency) {
  const auto inst = sample_instance(spec(1000, 0.5, 0.1), 0);
  EXPECT_EQ((inst.truth->array() != 0.0).count(), 100);
  EXPECT_EQ(inst.sparsity, 100);
  EXPECT_NO_THROW(inst.validate());
}

TEST(Ensemble, ZeroSparsity) {
  const auto inst = sample_instance(spec(50, 0.5, 0.0), 3);
  EXPECT_EQ(inst.truth->lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(inst.measurements.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Ensemble, DeterministicPerTrial) {
  const auto s = spec(60, 0.5, 0.1, 42);
  const auto a = sample_instance(s, 7);
  const auto b = sample_instance(s, 7);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.measurements, b.measurements);
  EXPECT_EQ(*a.truth, *b.truth);
  const auto c = sample_instance(s, 8);
  EXPECT_NE(a.matrix, c.matrix);
}

TEST(Ensemble, SeedsDifferAcrossCoordinates) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 100; ++t) {
    seen.insert(trial_seed(1, 0.5, 0.1, t));
    seen.insert(trial_seed(2, 0.5, 0.1, t));
    seen.insert(trial_seed(1, 0.5, 0.2, t));
    seen.insert(trial_seed(1, 0.6, 0.1, t));
  }
  EXPECT_EQ(seen.size(), 400u);
}

TEST(Ensemble, RademacherMagnitudes) {
  auto s = spec(200, 0.5, 0.1);
  s.nonzero_law = NonzeroLaw::Rademacher;
  const auto inst = sample_instance(s, 0);
  for (Eigen::Index i = 0; i < inst.truth->size(); ++i) {
    const double v = (*inst.truth)[i];
    EXPECT_TRUE(v == 0.0 || std::abs(v) == 1.0);
  }
}

TEST(Ensemble, EntriesLookStandardNormal) {
  const auto inst = sample_instance(spec(1000, 0.5, 0.0), 0);
  const double mean = inst.matrix.mean();
  const double var = inst.matrix.array().square().mean() - mean * mean;
  // 5e5 samples: sd of mean ≈ 1.4e-3, of variance ≈ 2e-3
  EXPECT_NEAR(mean, 0.0, 8e-3);
  EXPECT_NEAR(var, 1.0, 1e-2);
}

TEST(RunCell, ZeroSparsityAlwaysSucceeds) {
  for (const auto solver : {SolverKind::BasisPursuit, SolverKind::Amp, SolverKind::Omp}) {
    const auto c = run_cell(spec(40, 0.5, 0.0), solver, 10);
    EXPECT_EQ(c.successes, 10) << to_string(solver);
    EXPECT_EQ(c.solver_errors, 0);
  }
  EXPECT_THROW(run_cell(spec(40, 0.5, 0.0), SolverKind::BasisPursuit, 0), DomainError);
}

TEST(RunCell, IndependentOfThreadCount) {
  const auto s = spec(80, 0.5, 0.2, 9);
  RunOptions one;
  one.threads = 1;
  RunOptions four;
  four.threads = 4;
  for (const auto solver : {SolverKind::BasisPursuit, SolverKind::Amp}) {
    EXPECT_TRUE(same_cell(run_cell(s, solver, 24, one), run_cell(s, solver, 24, four)));
  }
}

TEST(RunCell, SuccessRateSeparatesAcrossThreshold) {
  const double bw = beta_w_fundamental(0.5).beta_w;
  const auto below = run_cell(spec(200, 0.5, 0.5 * bw, 3), SolverKind::BasisPursuit, 400);
  const auto above = run_cell(spec(200, 0.5, 1.5 * bw, 3), SolverKind::BasisPursuit, 400);
  EXPECT_GT(below.successes, above.successes);
  EXPECT_GE(below.success_rate(), 0.95);
  EXPECT_LE(above.success_rate(), 0.05);
}

TEST(PhaseDiagram, GridShapeAndSingleCell) {
  const auto base = spec(40, 0.5, 0.0, 4);
  const auto single = estimate_phase_diagram({0.5}, {0.1}, base, SolverKind::BasisPursuit, 8);
  ASSERT_EQ(single.cells.size(), 1u);
  auto s = base;
  s.beta = 0.1;
  EXPECT_TRUE(same_cell(single.cells[0], run_cell(s, SolverKind::BasisPursuit, 8)));

  const auto empty = estimate_phase_diagram({0.5, 0.6}, {}, base, SolverKind::BasisPursuit, 8);
  EXPECT_TRUE(empty.cells.empty());
  EXPECT_EQ(empty.n, 40);
}

TEST(PhaseDiagram, RelativeBetaGrid) {
  const auto base = spec(60, 0.5, 0.0, 4);
  const auto d = estimate_phase_diagram({0.3, 0.5}, {0.5, 1.0}, base, SolverKind::BasisPursuit, 2, {},
                                        BetaScale::RelativeToWeak);
  ASSERT_EQ(d.cells.size(), 4u);
  EXPECT_DOUBLE_EQ(d.cells[1].beta, beta_w_fundamental(0.3).beta_w);
  EXPECT_DOUBLE_EQ(d.cells[2].beta, 0.5 * beta_w_fundamental(0.5).beta_w);
}

TEST(EmpiricalThreshold, PreconditionsAndDegenerateTrials) {
  EXPECT_THROW(empirical_threshold(0.5, SolverKind::BasisPursuit, 100, 10, 0.001), DomainError);
  EXPECT_THROW(empirical_threshold(0.5, SolverKind::BasisPursuit, 100, 0, 0.05), DomainError);
  const auto e = empirical_threshold(0.5, SolverKind::BasisPursuit, 60, 1, 0.05, 5);
  EXPECT_TRUE(e.wide_bracket);
  EXPECT_FALSE(e.probes.empty());
  EXPECT_LE(e.lo, e.beta_hat);
  EXPECT_LE(e.beta_hat, e.hi);
}

TEST(EmpiricalThreshold, BracketMatchesProbeHistory) {
  const auto e = empirical_threshold(0.5, SolverKind::BasisPursuit, 100, 30, 0.02, 6);
  EXPECT_FALSE(e.wide_bracket);
  EXPECT_LE(e.hi - e.lo, 0.04 + 1e-12);
  for (const auto& p : e.probes) {
    if (p.beta == e.lo) EXPECT_GE(p.success_rate(), 0.5) << p.k;
    if (p.beta == e.hi) EXPECT_LT(p.success_rate(), 0.5) << p.k;
  }
  EXPECT_NEAR(e.beta_hat, beta_w_fundamental(0.5).beta_w, 0.06);
}
