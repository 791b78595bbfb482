#include "l1pt/threshold_curves.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "l1pt/errors.hpp"

namespace l1pt {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kSqrt2OverPi = 0.7978845608028653558798921198687637369517172623298;
constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215451716881012586580;

// Root brackets in β stay this far inside (0, α).
constexpr double kBetaMargin = 1e-9;

void require_alpha(double alpha, const char* op) {
  if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > 1.0) {
    throw DomainError(fmt::format("{}: alpha must lie in (0, 1], got {}", op, alpha));
  }
}

void require_interior(double beta, double alpha, const char* op) {
  require_alpha(alpha, op);
  if (!std::isfinite(beta) || !(beta > 0.0) || !(beta < alpha)) {
    throw DomainError(
        fmt::format("{}: need 0 < beta < alpha, got beta={} alpha={}", op, beta, alpha));
  }
}

double ext_objective(double y, double alpha) {
  return alpha * y * y - (1.0 - alpha) * std::log(std::erf(y));
}

double ext_slope(double y, double alpha) {
  return 2.0 * alpha * y - (1.0 - alpha) * kTwoOverSqrtPi * std::exp(-y * y) / std::erf(y);
}

double ext_curvature(double y, double alpha) {
  const double e = std::erf(y);
  const double g = kTwoOverSqrtPi * std::exp(-y * y);
  return 2.0 * alpha + (1.0 - alpha) * g * (2.0 * y * e + g) / (e * e);
}

// φ(z) − zΦ(z) = φ(z)(1 − z R(z)), no cancellation for large z.
double tail_gap(double z) { return gaussian_density(z) * (1.0 - z * mills_ratio(z)); }

// (1+z²)Φ(z) − zφ(z)
double amp_m(double z) {
  return gaussian_density(z) * ((1.0 + z * z) * mills_ratio(z) - z);
}

// Sign-carrying numerator of d/dz of the AMP objective.
double amp_objective_slope_numerator(double z, double alpha) {
  const double m = amp_m(z);
  const double g = tail_gap(z);
  const double num = 1.0 - (2.0 / alpha) * m;
  const double den = 1.0 + z * z - 2.0 * m;
  const double dnum = (4.0 / alpha) * g;
  const double dden = 2.0 * z + 4.0 * g;
  return dnum * den - num * dden;
}

double amp_objective_slope(double z, double alpha) {
  const double m = amp_m(z);
  const double den = 1.0 + z * z - 2.0 * m;
  return amp_objective_slope_numerator(z, alpha) / (den * den);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Geometric:
      return "geometric";
    case Method::Fundamental:
      return "fundamental";
    case Method::AmpStateEvolution:
      return "amp";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "geometric" || name == "geom") return Method::Geometric;
  if (name == "fundamental" || name == "fund") return Method::Fundamental;
  if (name == "amp") return Method::AmpStateEvolution;
  throw DomainError(fmt::format("unknown threshold method '{}'", name));
}

Tolerance default_threshold_tolerance() { return Tolerance{1e-13, 1e-13, 300}; }

double psi_com(double beta, double alpha) {
  if (!std::isfinite(beta) || !std::isfinite(alpha) || beta < 0.0 || !(beta < alpha) ||
      alpha > 1.0) {
    throw DomainError(
        fmt::format("psi_com: need 0 <= beta < alpha <= 1, got beta={} alpha={}", beta, alpha));
  }
  const double p = (alpha - beta) / (1.0 - beta);
  return (alpha - beta) * kLog2 + (1.0 - beta) * entropy(std::min(p, 1.0));
}

double solve_s_gamma(double gamma, const Tolerance& tol) {
  if (!std::isfinite(gamma) || !(gamma > 0.0) || !(gamma < 1.0)) {
    throw DomainError(fmt::format("solve_s_gamma: gamma must lie in (0, 1), got {}", gamma));
  }
  tol.validate();
  // s R(s) increases from 0 to 1, so the scaled residual has a single root.
  const double target = 1.0 - gamma;
  auto scaled = [target](double s) { return s * mills_ratio(s) - target; };

  constexpr double start = 1e-6;
  constexpr double upper_limit = 1e6;
  constexpr double lower_limit = 1e-300;
  double lo = start;
  double hi = start;
  if (scaled(start) < 0.0) {
    while (scaled(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > upper_limit) {
        throw ConvergenceError(
            fmt::format("solve_s_gamma: no sign change below s={} (gamma={})", upper_limit, gamma),
            lo);
      }
    }
  } else {
    while (scaled(lo) >= 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < lower_limit) {
        throw ConvergenceError(
            fmt::format("solve_s_gamma: no sign change above s={} (gamma={})", lower_limit, gamma),
            hi);
      }
    }
  }
  Tolerance inner = tol;
  inner.abs_tol = std::min(tol.abs_tol, 1e-16);
  return find_root(scaled, Bracket{lo, hi}, inner);
}

InternalAngleExponent psi_int(double beta, double alpha, const Tolerance& tol) {
  require_interior(beta, alpha, "psi_int");
  InternalAngleParams params;
  params.gamma = beta / alpha;
  const double g = params.gamma;
  params.s_gamma = solve_s_gamma(g, tol);
  const double s = params.s_gamma;
  params.y_gamma = g / (1.0 - g) * s;
  // ½y²(1−γ)/γ = ½ s y and y/γ = s/(1−γ).
  params.xi_value = -0.5 * s * params.y_gamma - 0.5 * std::log(2.0 / std::numbers::pi) +
                    std::log(s / (1.0 - g));
  return InternalAngleExponent{(alpha - beta) * (params.xi_value + kLog2), params};
}

double psi_ext_argmin(double alpha, const Tolerance& tol) {
  require_alpha(alpha, "psi_ext");
  if (alpha == 1.0) return 0.0;
  auto objective = [alpha](double y) { return ext_objective(y, alpha); };
  const Minimum coarse = minimize_1d(objective, Bracket{1e-12, 10.0}, tol);
  // The objective is convex; polish the argmin with Newton on its slope.
  double y = coarse.argmin;
  for (int it = 0; it < 8; ++it) {
    const double step = ext_slope(y, alpha) / ext_curvature(y, alpha);
    const double next = y - step;
    if (!(next > 0.0)) break;
    y = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * y) break;
  }
  if (!(ext_objective(y, alpha) <= coarse.value + 1e-15)) y = coarse.argmin;
  return y;
}

double psi_ext(double /*beta*/, double alpha, const Tolerance& tol) {
  require_alpha(alpha, "psi_ext");
  if (alpha == 1.0) return 0.0;
  return ext_objective(psi_ext_argmin(alpha, tol), alpha);
}

AngleExponents psi_net(double beta, double alpha, const Tolerance& tol) {
  require_interior(beta, alpha, "psi_net");
  AngleExponents out;
  out.psi_com = psi_com(beta, alpha);
  out.psi_int = psi_int(beta, alpha, tol).value;
  out.psi_ext = psi_ext(beta, alpha, tol);
  out.psi_net = out.psi_com - out.psi_int - out.psi_ext;
  return out;
}

double psi_net_slope(double beta, double alpha, const Tolerance& tol) {
  require_interior(beta, alpha, "psi_net_slope");
  const InternalAngleParams p = psi_int(beta, alpha, tol).params;
  const double s = p.s_gamma;
  return std::log((alpha - beta) / (1.0 - beta)) + p.xi_value + s * s / (2.0 * (1.0 - p.gamma));
}

ThresholdPoint beta_w_geometric(double alpha, const Tolerance& tol) {
  require_alpha(alpha, "beta_w_geometric");
  tol.validate();
  if (alpha == 1.0) return ThresholdPoint{1.0, 1.0, Method::Geometric, 0.0};
  const Bracket bracket{kBetaMargin, alpha - kBetaMargin};
  if (!(bracket.lo < bracket.hi)) {
    throw DomainError(fmt::format("beta_w_geometric: alpha={} too small", alpha));
  }
  double beta = 0.0;
  try {
    beta = find_root([&](double b) { return psi_net_slope(b, alpha, tol); }, bracket, tol);
  } catch (const BracketError& e) {
    throw ConvergenceError(
        fmt::format("beta_w_geometric: alpha={}: {}", alpha, e.what()), 0.0);
  }
  return ThresholdPoint{alpha, beta, Method::Geometric, psi_net(beta, alpha, tol).psi_net};
}

double fundamental_residual(double beta, double alpha) {
  if (!std::isfinite(beta) || !std::isfinite(alpha) || beta < 0.0 || !(beta < 1.0) ||
      !(beta < alpha) || alpha > 1.0) {
    throw DomainError(fmt::format(
        "fundamental_residual: need 0 <= beta < alpha <= 1, got beta={} alpha={}", beta, alpha));
  }
  const double e = erfinv((1.0 - alpha) / (1.0 - beta));
  return (1.0 - beta) * kSqrt2OverPi * std::exp(-e * e) / alpha - std::numbers::sqrt2 * e;
}

ThresholdPoint beta_w_fundamental(double alpha, const Tolerance& tol) {
  require_alpha(alpha, "beta_w_fundamental");
  tol.validate();
  if (alpha == 1.0) return ThresholdPoint{1.0, 1.0, Method::Fundamental, 0.0};
  const Bracket bracket{kBetaMargin, alpha - kBetaMargin};
  if (!(bracket.lo < bracket.hi)) {
    throw DomainError(fmt::format("beta_w_fundamental: alpha={} too small", alpha));
  }
  double beta = 0.0;
  try {
    beta = find_root([alpha](double b) { return fundamental_residual(b, alpha); }, bracket, tol);
  } catch (const BracketError& e) {
    throw ConvergenceError(
        fmt::format("beta_w_fundamental: alpha={}: {}", alpha, e.what()), 0.0);
  }
  return ThresholdPoint{alpha, beta, Method::Fundamental, fundamental_residual(beta, alpha)};
}

ThresholdPoint alpha_w_fundamental(double beta, const Tolerance& tol) {
  if (!std::isfinite(beta) || beta < 0.0 || !(beta < 1.0)) {
    throw DomainError(fmt::format("alpha_w_fundamental: beta must lie in [0, 1), got {}", beta));
  }
  tol.validate();
  if (beta == 0.0) return ThresholdPoint{0.0, 0.0, Method::Fundamental, 0.0};
  const Bracket bracket{beta + kBetaMargin * (1.0 - beta), 1.0};
  double alpha = 0.0;
  try {
    alpha = find_root([beta](double a) { return fundamental_residual(beta, a); }, bracket, tol);
  } catch (const BracketError& e) {
    throw ConvergenceError(
        fmt::format("alpha_w_fundamental: beta={}: {}", beta, e.what()), 0.0);
  }
  return ThresholdPoint{alpha, beta, Method::Fundamental, fundamental_residual(beta, alpha)};
}

double amp_state_objective(double z, double alpha) {
  if (!std::isfinite(z) || z < 0.0) {
    throw DomainError(fmt::format("amp_state_objective: z must be finite and >= 0, got {}", z));
  }
  require_alpha(alpha, "amp_state_objective");
  const double zc = std::max(z, 1e-8);
  const double m = amp_m(zc);
  const double value = (1.0 - (2.0 / alpha) * m) / (1.0 + zc * zc - 2.0 * m);
  if (!std::isfinite(value)) {
    throw DomainError(fmt::format("amp_state_objective: non-finite at z={} alpha={}", z, alpha));
  }
  return value;
}

AmpThreshold beta_w_amp(double alpha, const Tolerance& tol) {
  require_alpha(alpha, "beta_w_amp");
  tol.validate();
  if (alpha == 1.0) return AmpThreshold{ThresholdPoint{1.0, 1.0, Method::AmpStateEvolution, 0.0}, 0.0};

  constexpr int kScan = 2048;
  const double log_lo = std::log(1e-4);
  const double log_hi = std::log(50.0);
  std::vector<double> zs(kScan);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    zs[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kScan - 1));
    const double v = amp_state_objective(zs[i], alpha);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = zs[std::max(best - 1, 0)];
  const double hi = zs[std::min(best + 1, kScan - 1)];

  double z_star = zs[best];
  auto slope = [alpha](double z) { return amp_objective_slope_numerator(z, alpha); };
  if (slope(lo) > 0.0 && slope(hi) < 0.0) {
    z_star = find_root(slope, Bracket{lo, hi}, tol);
  } else {
    // Maximizer on the scan boundary, or flat to rounding: fall back to Brent.
    z_star = minimize_1d([alpha](double z) { return -amp_state_objective(z, alpha); },
                         Bracket{lo, hi}, tol)
                 .argmin;
  }
  const double beta = alpha * amp_state_objective(z_star, alpha);
  return AmpThreshold{
      ThresholdPoint{alpha, beta, Method::AmpStateEvolution, amp_objective_slope(z_star, alpha)},
      z_star};
}

ThresholdPoint beta_w(Method method, double alpha, const Tolerance& tol) {
  switch (method) {
    case Method::Geometric:
      return beta_w_geometric(alpha, tol);
    case Method::Fundamental:
      return beta_w_fundamental(alpha, tol);
    case Method::AmpStateEvolution:
      return beta_w_amp(alpha, tol).point;
  }
  throw DomainError("beta_w: unknown method");
}

namespace {

void validate_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    if (!std::isfinite(a) || !(a > 0.0) || a > 1.0) {
      throw DomainError(fmt::format("alpha grid value {} outside (0, 1]", a));
    }
    if (i > 0 && !(a > grid[i - 1])) {
      throw DomainError(fmt::format("alpha grid not strictly increasing at {}", a));
    }
  }
}

}  // namespace

ThresholdCurve compute_curve(Method method, const std::vector<double>& alpha_grid,
                             const Tolerance& tol) {
  validate_grid(alpha_grid);
  ThresholdCurve curve;
  curve.tolerance = tol;
  curve.points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    try {
      curve.points.push_back(beta_w(method, alpha, tol));
    } catch (const std::exception& e) {
      throw Error(fmt::format("{} curve failed at alpha={}: {}", to_string(method), alpha, e.what()));
    }
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].beta_w < curve.points[i - 1].beta_w) {
      throw Error(fmt::format("{} curve not monotone: beta_w({})={} < beta_w({})={}",
                              to_string(method), curve.points[i].alpha, curve.points[i].beta_w,
                              curve.points[i - 1].alpha, curve.points[i - 1].beta_w));
    }
  }
  return curve;
}

std::vector<Characterization> standard_characterizations() {
  return {
      {"geometric", [](double a, const Tolerance& t) { return beta_w_geometric(a, t); }},
      {"fundamental", [](double a, const Tolerance& t) { return beta_w_fundamental(a, t); }},
      {"amp", [](double a, const Tolerance& t) { return beta_w_amp(a, t).point; }},
  };
}

EquivalenceReport verify_equivalence(const std::vector<double>& alpha_grid,
                                     const std::vector<Characterization>& methods,
                                     double threshold, const Tolerance& tol) {
  validate_grid(alpha_grid);
  if (!(threshold >= 0.0)) {
    throw DomainError(fmt::format("verify_equivalence: threshold must be >= 0, got {}", threshold));
  }
  EquivalenceReport report;
  report.threshold = threshold;
  for (const auto& m : methods) report.names.push_back(m.name);
  report.pass = true;

  for (double alpha : alpha_grid) {
    EquivalenceRow row;
    row.alpha = alpha;
    for (const auto& m : methods) {
      try {
        row.beta_w.emplace_back(m.compute(alpha, tol).beta_w);
      } catch (const std::exception& e) {
        row.beta_w.emplace_back(std::nullopt);
        row.errors.push_back(fmt::format("{}: {}", m.name, e.what()));
      }
    }
    for (std::size_t i = 0; i < row.beta_w.size(); ++i) {
      for (std::size_t j = i + 1; j < row.beta_w.size(); ++j) {
        if (row.beta_w[i] && row.beta_w[j]) {
          row.max_deviation = std::max(row.max_deviation, std::abs(*row.beta_w[i] - *row.beta_w[j]));
        }
      }
    }
    if (!row.errors.empty() || row.max_deviation > threshold) report.pass = false;
    if (!report.worst_alpha || row.max_deviation > report.max_deviation) {
      report.max_deviation = row.max_deviation;
      report.worst_alpha = alpha;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

EquivalenceReport verify_equivalence(const std::vector<double>& alpha_grid, double threshold,
                                     const Tolerance& tol) {
  return verify_equivalence(alpha_grid, standard_characterizations(), threshold, tol);
}

}  // namespace l1pt
