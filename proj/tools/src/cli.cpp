#include "l1pt/cli.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"
#include "l1pt/recovery_solvers.hpp"
#include "l1pt/threshold_curves.hpp"

namespace l1pt::cli {

namespace {

double round12(double v) { return std::round(v * 1e12) / 1e12; }

template <typename T>
T parse_integer(std::string_view flag, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError(fmt::format("{}: '{}' is not an integer", flag, text));
  }
  return value;
}

std::string join_args(const std::vector<std::pair<std::string, std::string>>& flags) {
  std::string line;
  for (const auto& [k, v] : flags) {
    if (v.empty()) continue;
    line += fmt::format(" --{} {}", k, v);
  }
  return line;
}

std::vector<double> require_grid(std::string_view flag, const std::string& text) {
  auto grid = parse_grid(text);
  if (grid.empty()) throw UsageError(fmt::format("{}: grid '{}' is empty", flag, text));
  return grid;
}

void check_alpha(std::string_view flag, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw UsageError(fmt::format("{}: alpha must lie in (0, 1], got {}", flag, alpha));
  }
}

struct Ctx {
  std::ostream& out;
  std::ostream& err;
};

// threshold

struct ThresholdArgs {
  std::string alpha;
  std::string method = "all";
};

int cmd_threshold(const ThresholdArgs& a, Ctx& ctx) {
  const double alpha = parse_real("--alpha", a.alpha);
  check_alpha("--alpha", alpha);
  std::vector<Method> methods;
  if (a.method == "all") {
    methods = {Method::Geometric, Method::Fundamental, Method::AmpStateEvolution};
  } else {
    try {
      methods = {method_from_string(a.method)};
    } catch (const DomainError& e) {
      throw UsageError(fmt::format("--method: {}", e.what()));
    }
  }
  ThresholdCurve rows;
  for (const Method m : methods) rows.points.push_back(beta_w(m, alpha));
  std::ostringstream buf;
  export_csv(rows, buf);
  // drop the tolerance comment; rows only
  std::string text = buf.str();
  text.erase(0, text.find('\n') + 1);
  ctx.out << text;
  return 0;
}

// curve

struct CurveArgs {
  std::string grid;
  std::string method = "fund";
  std::string out;
};

int cmd_curve(const CurveArgs& a, Ctx& ctx) {
  const auto grid = require_grid("--grid", a.grid);
  for (const double alpha : grid) check_alpha("--grid", alpha);
  Method method;
  try {
    method = method_from_string(a.method);
  } catch (const DomainError& e) {
    throw UsageError(fmt::format("--method: {}", e.what()));
  }
  const ThresholdCurve curve = compute_curve(method, grid);
  const std::vector<std::string> comments = {
      fmt::format("l1pt {} curve{}", version(),
                  join_args({{"grid", a.grid}, {"method", std::string(to_string(method))}}))};
  if (a.out.empty()) {
    export_csv(curve, ctx.out, comments);
  } else {
    export_csv(curve, std::filesystem::path(a.out), comments);
    ctx.out << fmt::format("wrote {} points to {}\n", curve.points.size(), a.out);
  }
  return 0;
}

// equivalence

struct EquivalenceArgs {
  std::string grid = "0.05:0.95:0.05";
  std::string tol = "1e-4";
};

int cmd_equivalence(const EquivalenceArgs& a, Ctx& ctx) {
  const auto grid = require_grid("--grid", a.grid);
  for (const double alpha : grid) check_alpha("--grid", alpha);
  const double tol = parse_real("--tol", a.tol);
  if (!(tol > 0.0)) throw UsageError(fmt::format("--tol must be > 0, got {}", tol));

  const EquivalenceReport report = verify_equivalence(grid, tol);
  std::string header = "alpha";
  for (const auto& name : report.names) header += "," + name;
  ctx.out << header << ",max_deviation\n";
  for (const auto& row : report.rows) {
    std::string line = fmt::format("{:.17g}", row.alpha);
    for (const auto& b : row.beta_w) line += b ? fmt::format(",{:.17g}", *b) : std::string(",nan");
    ctx.out << line << fmt::format(",{:.3e}\n", row.max_deviation);
    for (const auto& e : row.errors) ctx.err << fmt::format("alpha={}: {}\n", row.alpha, e);
  }
  ctx.out << fmt::format("# max deviation {:.3e}{} against tolerance {:.3e}: {}\n",
                         report.max_deviation,
                         report.worst_alpha ? fmt::format(" at alpha={}", *report.worst_alpha)
                                            : std::string(),
                         tol, report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

// gen

struct GenArgs {
  std::string n, m, k, seed = "0";
  std::string law = "standard-normal";
  std::string out;
};

int cmd_gen(const GenArgs& a, Ctx& ctx) {
  const int n = parse_integer<int>("--n", a.n);
  const int m = parse_integer<int>("--m", a.m);
  const int k = parse_integer<int>("--k", a.k);
  const auto seed = parse_integer<std::uint64_t>("--seed", a.seed);
  if (n < 1 || m < 1 || m > n) throw UsageError(fmt::format("need 1 <= m <= n, got m={} n={}", m, n));
  if (k < 0 || k > m) throw UsageError(fmt::format("need 0 <= k <= m, got k={} m={}", k, m));
  NonzeroLaw law;
  try {
    law = nonzero_law_from_string(a.law);
  } catch (const DomainError& e) {
    throw UsageError(fmt::format("--law: {}", e.what()));
  }
  const ProblemInstance inst = sample_planted(n, m, k, law, seed);
  if (a.out.empty()) {
    ctx.out << instance_to_json(inst) << '\n';
  } else {
    write_instance(inst, a.out);
    ctx.out << fmt::format("wrote {}x{} instance (k={}) to {}\n", m, n, k, a.out);
  }
  return 0;
}

// solve

struct SolveArgs {
  std::string instance;
  std::string solver = "bp";
  std::string k;
  bool certify = false;
};

int cmd_solve(const SolveArgs& a, Ctx& ctx) {
  SolverKind kind;
  try {
    kind = solver_from_string(a.solver);
  } catch (const DomainError& e) {
    throw UsageError(fmt::format("--solver: {}", e.what()));
  }
  const ProblemInstance inst = read_instance(a.instance);
  SolverOptions options;
  options.certify = a.certify;
  RecoveryOutcome outcome;
  switch (kind) {
    case SolverKind::BasisPursuit:
      outcome = basis_pursuit_solve(inst, options);
      break;
    case SolverKind::Amp:
      outcome = amp_solve(inst, options);
      break;
    case SolverKind::Omp: {
      int k = 0;
      if (!a.k.empty()) {
        k = parse_integer<int>("--k", a.k);
      } else if (inst.sparsity) {
        k = std::max(*inst.sparsity, 1);
      } else {
        throw UsageError("--k is required for omp when the instance has no k");
      }
      if (k < 1 || k > inst.rows()) {
        throw UsageError(fmt::format("--k must lie in [1, {}], got {}", inst.rows(), k));
      }
      outcome = omp_solve(inst, k);
      break;
    }
  }
  if (a.certify && !outcome.certified_optimal) {
    try {
      outcome.certified_optimal = certify_l1_optimality(inst, outcome.estimate, CertifyOptions{});
    } catch (const DomainError&) {
      outcome.certified_optimal = false;  // infeasible estimate
    }
  }
  ctx.out << fmt::format("solver {}\n", to_string(kind));
  ctx.out << fmt::format("iterations {}\n", outcome.iterations);
  ctx.out << fmt::format("converged {}\n", outcome.converged);
  ctx.out << fmt::format("residual_norm {:.17g}\n", outcome.residual_norm);
  if (outcome.rel_error) ctx.out << fmt::format("rel_error {:.17g}\n", *outcome.rel_error);
  if (outcome.certified_optimal) ctx.out << fmt::format("certified {}\n", *outcome.certified_optimal);
  return 0;
}

// phase

struct PhaseArgs {
  std::string n, alpha_grid, beta_grid, trials = "20";
  std::string solver = "bp";
  std::string seed = "0";
  std::string law = "standard-normal";
  std::string threads = "0";
  bool relative = false;
  std::string out;
};

int cmd_phase(const PhaseArgs& a, Ctx& ctx) {
  EnsembleSpec spec;
  spec.n = parse_integer<int>("--n", a.n);
  if (spec.n < 1) throw UsageError(fmt::format("--n must be >= 1, got {}", spec.n));
  spec.master_seed = parse_integer<std::uint64_t>("--seed", a.seed);
  const auto alphas = require_grid("--alpha-grid", a.alpha_grid);
  const auto betas = parse_grid(a.beta_grid);
  const int trials = parse_integer<int>("--trials", a.trials);
  if (trials < 1) throw UsageError(fmt::format("--trials must be >= 1, got {}", trials));
  RunOptions options;
  options.threads = parse_integer<int>("--threads", a.threads);
  if (options.threads < 0) throw UsageError("--threads must be >= 0");
  SolverKind kind;
  try {
    kind = solver_from_string(a.solver);
    spec.nonzero_law = nonzero_law_from_string(a.law);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const BetaScale scale = a.relative ? BetaScale::RelativeToWeak : BetaScale::Absolute;
  for (const double alpha : alphas) {
    check_alpha("--alpha-grid", alpha);
    for (const double b : betas) {
      EnsembleSpec s = spec;
      s.alpha = alpha;
      s.beta = a.relative ? b * beta_w_fundamental(alpha).beta_w : b;
      try {
        s.validate();
      } catch (const SpecError& e) {
        throw UsageError(fmt::format("cell alpha={} beta={}: {}", alpha, b, e.what()));
      }
    }
  }

  const PhaseDiagram diagram = estimate_phase_diagram(alphas, betas, spec, kind, trials, options, scale);
  int errors = 0;
  for (const auto& c : diagram.cells) errors += c.solver_errors;
  if (errors > 0) ctx.err << fmt::format("{} trial(s) ended in solver errors, counted as failures\n", errors);

  const std::vector<std::string> comments = {
      fmt::format("l1pt {} phase{}{}", version(),
                  join_args({{"n", a.n},
                             {"alpha-grid", a.alpha_grid},
                             {"beta-grid", a.beta_grid},
                             {"trials", a.trials},
                             {"solver", std::string(to_string(kind))},
                             {"seed", a.seed},
                             {"law", std::string(to_string(spec.nonzero_law))}}),
                  a.relative ? " --relative" : ""),
      fmt::format("success: rel_error <= {:g}", options.success_tol)};
  if (a.out.empty()) {
    export_csv(diagram, ctx.out, comments);
  } else {
    export_csv(diagram, std::filesystem::path(a.out), comments);
    ctx.out << fmt::format("wrote {} cells to {}\n", diagram.cells.size(), a.out);
  }
  return 0;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.empty()) return grid;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      throw UsageError(fmt::format("grid '{}': expected start:stop:step", text));
    }
    const double start = parse_real("grid start", text.substr(0, c1));
    const double stop = parse_real("grid stop", text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_real("grid step", text.substr(c2 + 1));
    if (!(step > 0.0)) throw UsageError(fmt::format("grid '{}': step must be > 0", text));
    if (stop < start) return grid;
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw UsageError(fmt::format("grid '{}' has too many points", text));
    for (long long i = 0; i < count; ++i) grid.push_back(round12(start + static_cast<double>(i) * step));
    return grid;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
    grid.push_back(round12(parse_real("grid value", item)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return grid;
}

double parse_real(std::string_view flag, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw UsageError(fmt::format("{}: '{}' is not a finite number", flag, text));
  }
  return value;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak-threshold curves and sparse recovery experiments", "l1pt"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  ThresholdArgs threshold;
  auto* sc_threshold = app.add_subcommand("threshold", "Weak threshold beta_w at one alpha");
  sc_threshold->add_option("--alpha", threshold.alpha, "Undersampling ratio m/n in (0, 1]")->required();
  sc_threshold->add_option("--method", threshold.method, "geom | fund | amp | all")->capture_default_str();

  CurveArgs curve;
  auto* sc_curve = app.add_subcommand("curve", "Weak threshold curve over an alpha grid, as CSV");
  sc_curve->add_option("--grid", curve.grid, "start:stop:step or comma list")->required();
  sc_curve->add_option("--method", curve.method, "geom | fund | amp")->capture_default_str();
  sc_curve->add_option("--out", curve.out, "Output file (default stdout)");

  EquivalenceArgs equivalence;
  auto* sc_equiv = app.add_subcommand("equivalence", "Check that the three characterizations agree");
  sc_equiv->add_option("--grid", equivalence.grid, "Alpha grid")->capture_default_str();
  sc_equiv->add_option("--tol", equivalence.tol, "Allowed pairwise |delta beta_w|")->capture_default_str();

  GenArgs gen;
  auto* sc_gen = app.add_subcommand("gen", "Sample a planted Gaussian instance as JSON");
  sc_gen->add_option("--n", gen.n, "Columns")->required();
  sc_gen->add_option("--m", gen.m, "Rows")->required();
  sc_gen->add_option("--k", gen.k, "Nonzeros")->required();
  sc_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  sc_gen->add_option("--law", gen.law, "standard-normal | rademacher")->capture_default_str();
  sc_gen->add_option("--out", gen.out, "Output file (default stdout)");

  SolveArgs solve;
  auto* sc_solve = app.add_subcommand("solve", "Run a solver on an instance file");
  sc_solve->add_option("--instance", solve.instance, "Instance JSON")->required();
  sc_solve->add_option("--solver", solve.solver, "amp | bp | omp")->capture_default_str();
  sc_solve->add_option("--k", solve.k, "OMP atom budget (default: instance k)");
  sc_solve->add_flag("--certify", solve.certify, "Search for a dual certificate");

  PhaseArgs phase;
  auto* sc_phase = app.add_subcommand("phase", "Monte Carlo phase diagram, as CSV");
  sc_phase->add_option("--n", phase.n, "Columns")->required();
  sc_phase->add_option("--alpha-grid", phase.alpha_grid, "Alpha grid")->required();
  sc_phase->add_option("--beta-grid", phase.beta_grid, "Beta grid")->required();
  sc_phase->add_option("--trials", phase.trials, "Trials per cell")->capture_default_str();
  sc_phase->add_option("--solver", phase.solver, "amp | bp | omp")->capture_default_str();
  sc_phase->add_option("--seed", phase.seed, "Master seed")->capture_default_str();
  sc_phase->add_option("--law", phase.law, "standard-normal | rademacher")->capture_default_str();
  sc_phase->add_option("--threads", phase.threads, "Worker threads, 0 = all cores")->capture_default_str();
  sc_phase->add_flag("--relative", phase.relative, "Beta grid in multiples of beta_w(alpha)");
  sc_phase->add_option("--out", phase.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  Ctx ctx{out, err};
  try {
    if (*sc_threshold) return cmd_threshold(threshold, ctx);
    if (*sc_curve) return cmd_curve(curve, ctx);
    if (*sc_equiv) return cmd_equivalence(equivalence, ctx);
    if (*sc_gen) return cmd_gen(gen, ctx);
    if (*sc_solve) return cmd_solve(solve, ctx);
    if (*sc_phase) return cmd_phase(phase, ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace l1pt::cli
