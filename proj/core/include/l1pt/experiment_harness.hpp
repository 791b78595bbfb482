#ifndef L1PT_EXPERIMENT_HARNESS_HPP
#define L1PT_EXPERIMENT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "l1pt/recovery_solvers.hpp"
#include "l1pt/threshold_curves.hpp"

namespace l1pt {

std::string_view version();

enum class NonzeroLaw { StandardNormal, Rademacher };

std::string_view to_string(NonzeroLaw law);
NonzeroLaw nonzero_law_from_string(std::string_view name);

/// Gaussian ensemble with m = round(α·n) rows and k = round(β·n) nonzeros.
struct EnsembleSpec {
  int n = 0;
  double alpha = 0.5;
  double beta = 0.0;
  NonzeroLaw nonzero_law = NonzeroLaw::StandardNormal;
  std::uint64_t master_seed = 0;

  int m() const;
  int k() const;
  void validate() const;
};

/// Seed of the RNG stream for one trial; depends only on its arguments.
std::uint64_t trial_seed(std::uint64_t master_seed, double alpha, double beta,
                         std::uint64_t trial_index);

/// A with i.i.d. N(0,1) entries, uniform support of size k, uniform signs.
ProblemInstance sample_planted(int n, int m, int k, NonzeroLaw law, std::uint64_t stream_seed);

ProblemInstance sample_instance(const EnsembleSpec& spec, std::uint64_t trial_index);

struct RunOptions {
  SolverOptions bp;
  SolverOptions amp;
  double success_tol = 1e-4;  ///< rel_error at or below counts as recovery
  int threads = 0;            ///< 0 means hardware concurrency

  RunOptions();
};

struct PhaseCell {
  double alpha = 0.0;
  double beta = 0.0;
  int n = 0;
  int trials = 0;
  int successes = 0;
  double mean_rel_error = 0.0;  ///< over trials whose solver returned; NaN if none did
  int solver_errors = 0;        ///< not persisted

  double success_rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

PhaseCell run_cell(const EnsembleSpec& spec, SolverKind solver, int trials,
                   const RunOptions& options = {});

enum class BetaScale { Absolute, RelativeToWeak };

struct PhaseDiagram {
  SolverKind solver = SolverKind::BasisPursuit;
  int n = 0;
  std::uint64_t master_seed = 0;
  std::string tool_version;
  std::vector<PhaseCell> cells;  ///< α-major, β-minor
};

/// With BetaScale::RelativeToWeak each β is a multiple of the analytic weak
/// threshold at that α.
PhaseDiagram estimate_phase_diagram(const std::vector<double>& alpha_grid,
                                    const std::vector<double>& beta_grid,
                                    const EnsembleSpec& spec_template, SolverKind solver,
                                    int trials, const RunOptions& options = {},
                                    BetaScale scale = BetaScale::Absolute);

struct ThresholdProbe {
  int k = 0;
  double beta = 0.0;
  int trials = 0;
  int successes = 0;

  double success_rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

struct EmpiricalThreshold {
  double beta_hat = 0.0;
  double lo = 0.0;  ///< largest probed β with success rate ≥ 0.5
  double hi = 0.0;  ///< smallest probed β above `lo` with success rate < 0.5
  std::vector<ThresholdProbe> probes;  ///< in evaluation order
  bool non_monotone = false;
  bool wide_bracket = false;
  std::vector<std::string> warnings;
};

/// Bisection on k for the 50% success level at m = round(α·n).
EmpiricalThreshold empirical_threshold(double alpha, SolverKind solver, int n,
                                       int trials_per_probe, double tol_beta,
                                       std::uint64_t master_seed = 0,
                                       const RunOptions& options = {});

// CSV persistence. Lines starting with '#' are comments; floats use 17
// significant digits so a round trip is exact.

void export_csv(const ThresholdCurve& curve, std::ostream& out,
                const std::vector<std::string>& comments = {});
void export_csv(const PhaseDiagram& diagram, std::ostream& out,
                const std::vector<std::string>& comments = {});
void export_csv(const ThresholdCurve& curve, const std::filesystem::path& path,
                const std::vector<std::string>& comments = {});
void export_csv(const PhaseDiagram& diagram, const std::filesystem::path& path,
                const std::vector<std::string>& comments = {});

ThresholdCurve import_curve_csv(std::istream& in);
PhaseDiagram import_diagram_csv(std::istream& in);
ThresholdCurve import_curve_csv(const std::filesystem::path& path);
PhaseDiagram import_diagram_csv(const std::filesystem::path& path);

// Instance files (JSON).

std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(std::string_view text);
void write_instance(const ProblemInstance& instance, const std::filesystem::path& path);
ProblemInstance read_instance(const std::filesystem::path& path);

}  // namespace l1pt

#endif  // L1PT_EXPERIMENT_HARNESS_HPP
