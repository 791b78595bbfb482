#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

namespace l1pt {

namespace {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct TrialResult {
  bool solver_ok = false;
  bool success = false;
  double rel_error = 0.0;
};

TrialResult run_trial(const EnsembleSpec& spec, SolverKind solver, std::uint64_t trial,
                      const RunOptions& options) {
  const ProblemInstance instance = sample_instance(spec, trial);
  TrialResult result;
  try {
    RecoveryOutcome outcome;
    switch (solver) {
      case SolverKind::BasisPursuit:
        outcome = basis_pursuit_solve(instance, options.bp);
        break;
      case SolverKind::Amp:
        outcome = amp_solve(instance, options.amp);
        break;
      case SolverKind::Omp:
        outcome = omp_solve(instance, std::max(spec.k(), 1));
        break;
    }
    result.solver_ok = true;
    result.rel_error = outcome.rel_error.value_or(std::numeric_limits<double>::infinity());
    result.success = result.rel_error <= options.success_tol;
  } catch (const Error&) {
    result.solver_ok = false;
  }
  return result;
}

PhaseCell aggregate(const EnsembleSpec& spec, const TrialResult* first, int trials) {
  PhaseCell cell;
  cell.alpha = spec.alpha;
  cell.beta = spec.beta;
  cell.n = spec.n;
  cell.trials = trials;
  double sum = 0.0;
  int returned = 0;
  for (int t = 0; t < trials; ++t) {
    const TrialResult& r = first[t];
    if (!r.solver_ok) {
      ++cell.solver_errors;
      continue;
    }
    if (r.success) ++cell.successes;
    sum += r.rel_error;
    ++returned;
  }
  cell.mean_rel_error = returned > 0 ? sum / returned : std::numeric_limits<double>::quiet_NaN();
  return cell;
}

std::vector<PhaseCell> run_cells(const std::vector<EnsembleSpec>& specs, SolverKind solver,
                                 int trials, const RunOptions& options) {
  if (trials < 1) throw DomainError(fmt::format("trials must be >= 1, got {}", trials));
  for (const auto& s : specs) s.validate();
  const std::size_t per = static_cast<std::size_t>(trials);
  std::vector<TrialResult> results(specs.size() * per);
  parallel_for(results.size(), options.threads, [&](std::size_t i) {
    results[i] = run_trial(specs[i / per], solver, i % per, options);
  });
  std::vector<PhaseCell> cells;
  cells.reserve(specs.size());
  for (std::size_t c = 0; c < specs.size(); ++c) {
    cells.push_back(aggregate(specs[c], results.data() + c * per, trials));
  }
  return cells;
}

}  // namespace

PhaseCell run_cell(const EnsembleSpec& spec, SolverKind solver, int trials,
                   const RunOptions& options) {
  return run_cells({spec}, solver, trials, options).front();
}

PhaseDiagram estimate_phase_diagram(const std::vector<double>& alpha_grid,
                                    const std::vector<double>& beta_grid,
                                    const EnsembleSpec& spec_template, SolverKind solver,
                                    int trials, const RunOptions& options, BetaScale scale) {
  std::vector<EnsembleSpec> specs;
  specs.reserve(alpha_grid.size() * beta_grid.size());
  for (const double alpha : alpha_grid) {
    const double unit = scale == BetaScale::RelativeToWeak ? beta_w_fundamental(alpha).beta_w : 1.0;
    for (const double b : beta_grid) {
      EnsembleSpec s = spec_template;
      s.alpha = alpha;
      s.beta = b * unit;
      specs.push_back(s);
    }
  }
  PhaseDiagram diagram;
  diagram.solver = solver;
  diagram.n = spec_template.n;
  diagram.master_seed = spec_template.master_seed;
  diagram.tool_version = std::string(version());
  diagram.cells = run_cells(specs, solver, trials, options);
  return diagram;
}

EmpiricalThreshold empirical_threshold(double alpha, SolverKind solver, int n,
                                       int trials_per_probe, double tol_beta,
                                       std::uint64_t master_seed, const RunOptions& options) {
  if (n < 1) throw DomainError(fmt::format("empirical_threshold: n must be >= 1, got {}", n));
  if (!(tol_beta >= 1.0 / n)) {
    throw DomainError(fmt::format("empirical_threshold: tol_beta={} is below 1/n={}", tol_beta, 1.0 / n));
  }
  if (trials_per_probe < 1) {
    throw DomainError(fmt::format("empirical_threshold: trials_per_probe must be >= 1, got {}",
                                  trials_per_probe));
  }
  EnsembleSpec base;
  base.n = n;
  base.alpha = alpha;
  base.master_seed = master_seed;
  base.validate();
  const int m = base.m();

  EmpiricalThreshold est;
  auto probe = [&](int k) {
    EnsembleSpec s = base;
    s.beta = static_cast<double>(k) / n;
    const PhaseCell cell = run_cell(s, solver, trials_per_probe, options);
    est.probes.push_back({k, s.beta, cell.trials, cell.successes});
    return cell.success_rate() >= 0.5;
  };

  // k = 0 always recovers; it is the implicit lower end.
  int lo = 0;
  int hi = m;
  const int width = std::max(1, static_cast<int>(std::floor(2.0 * tol_beta * n + 1e-9)));
  if (probe(hi)) {
    lo = hi;
    est.warnings.push_back(fmt::format("success rate >= 0.5 even at k=m={}", m));
  }
  while (hi - lo > width) {
    const int mid = lo + (hi - lo) / 2;
    (probe(mid) ? lo : hi) = mid;
  }

  // Consistency over the whole history, in k order.
  std::vector<ThresholdProbe> sorted = est.probes;
  sorted.push_back({0, 0.0, trials_per_probe, trials_per_probe});
  std::sort(sorted.begin(), sorted.end(),
            [](const ThresholdProbe& a, const ThresholdProbe& b) { return a.k < b.k; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const auto& a = sorted[i];
      const auto& b = sorted[j];
      const double pooled =
          static_cast<double>(a.successes + b.successes) / (a.trials + b.trials);
      const double sd = std::sqrt(pooled * (1.0 - pooled) * (1.0 / a.trials + 1.0 / b.trials));
      if (b.success_rate() - a.success_rate() > 3.0 * sd && sd > 0.0) {
        est.non_monotone = true;
        est.warnings.push_back(fmt::format(
            "non-monotone probes: k={} rate {:.3f} < k={} rate {:.3f}", a.k, a.success_rate(), b.k,
            b.success_rate()));
      }
    }
  }

  int first_fail = m + 1;
  int last_pass = 0;
  for (const auto& p : sorted) {
    if (p.success_rate() >= 0.5) {
      last_pass = std::max(last_pass, p.k);
    } else {
      first_fail = std::min(first_fail, p.k);
    }
  }
  if (first_fail > m) {
    lo = hi = m;
  } else {
    // widest bracket consistent with every probe
    lo = 0;
    for (const auto& p : sorted) {
      if (p.success_rate() >= 0.5 && p.k < first_fail) lo = std::max(lo, p.k);
    }
    hi = m;
    for (const auto& p : sorted) {
      if (p.success_rate() < 0.5 && p.k > last_pass) hi = std::min(hi, p.k);
    }
    if (last_pass > first_fail) {
      est.warnings.push_back(
          fmt::format("bracket widened to k in [{}, {}] by inconsistent probes", lo, hi));
    }
  }
  est.lo = static_cast<double>(lo) / n;
  est.hi = static_cast<double>(hi) / n;
  est.beta_hat = 0.5 * (est.lo + est.hi);
  est.wide_bracket = trials_per_probe < 25 || hi - lo > width;
  return est;
}

}  // namespace l1pt
