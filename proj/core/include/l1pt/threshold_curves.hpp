#ifndef L1PT_THRESHOLD_CURVES_HPP
#define L1PT_THRESHOLD_CURVES_HPP

// Weak ℓ1 recovery threshold β_w(α) for Gaussian measurement matrices,
// computed three independent ways:
//
//   Geometric     neighborliness exponents of the projected cross-polytope,
//                 ψnet = ψcom − ψint − ψext. ψnet(β; α) ≤ 0 on (0, α) and
//                 reaches 0 exactly at β_w, so β_w is located as the root of
//                 ∂ψnet/∂β, which does change sign there.
//   Fundamental   root in β of the closed-form residual
//                 F(β, α) = (1−β)√(2/π) e^{−e²}/α − √2 e,
//                 e = erfinv((1−α)/(1−β)). F > 0 below the curve.
//   AMP           state-evolution bound α · max_z (1 − (2/α)M(z)) / (1 + z² − 2M(z)),
//                 M(z) = (1+z²)Φ(z) − zφ(z), Φ the upper Gaussian tail.
//
// All logarithms are natural.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l1pt/special_functions.hpp"

namespace l1pt {

enum class Method { Geometric, Fundamental, AmpStateEvolution };

std::string_view to_string(Method method);
/// Accepts "geometric"/"geom", "fundamental"/"fund", "amp".
Method method_from_string(std::string_view name);

/// Exponents in nats per dimension. psi_int and psi_ext are decay rates, so
/// the neighborliness condition reads psi_net = psi_com − psi_int − psi_ext < 0.
struct AngleExponents {
  double psi_com = 0.0;
  double psi_int = 0.0;
  double psi_ext = 0.0;
  double psi_net = 0.0;
};

/// Intermediate quantities of the internal-angle exponent, kept for audit.
struct InternalAngleParams {
  double gamma = 0.0;    ///< β/α
  double s_gamma = 0.0;  ///< root of Φ(s) = (1−γ)φ(s)/s
  double y_gamma = 0.0;  ///< γ/(1−γ) · s_gamma
  double xi_value = 0.0; ///< ξ_γ(y_γ)
};

struct ThresholdPoint {
  double alpha = 0.0;
  double beta_w = 0.0;
  Method method = Method::Fundamental;
  double residual = 0.0;  ///< defining condition evaluated at the returned point
};

struct ThresholdCurve {
  std::vector<ThresholdPoint> points;
  Tolerance tolerance;
};

/// Tolerance used for threshold roots unless the caller supplies one.
Tolerance default_threshold_tolerance();

/// Combinatorial exponent (α−β)log 2 + (1−β)H((α−β)/(1−β)); 0 ≤ β < α ≤ 1.
double psi_com(double beta, double alpha);

/// s ≥ 0 solving Φ(s) = (1−γ)φ(s)/s for 0 < γ < 1. The bracket is found by
/// doubling (or halving) from s = 1e−6 until the residual changes sign.
double solve_s_gamma(double gamma, const Tolerance& tol);

struct InternalAngleExponent {
  double value = 0.0;
  InternalAngleParams params;
};

/// ψint = (α−β)(ξ_γ(y_γ) + log 2),
/// ξ_γ(y) = −½y²(1−γ)/γ − ½log(2/π) + log(y/γ). Requires 0 < β < α ≤ 1.
InternalAngleExponent psi_int(double beta, double alpha, const Tolerance& tol);

/// ψext = min_{y ≥ 0} αy² − (1−α) log erf(y). Depends on α only; `beta` is
/// accepted for symmetry with the other exponents and ignored.
double psi_ext(double beta, double alpha, const Tolerance& tol);

/// Minimizer of the ψext objective (0 at α = 1).
double psi_ext_argmin(double alpha, const Tolerance& tol);

AngleExponents psi_net(double beta, double alpha, const Tolerance& tol);

/// ∂ψnet/∂β at fixed α: log((α−β)/(1−β)) + ξ_γ(y_γ) + (1−γ)y_γ²/(2γ²).
double psi_net_slope(double beta, double alpha, const Tolerance& tol);

/// β_w from the neighborliness exponents. α = 1 returns the limit β_w = 1.
ThresholdPoint beta_w_geometric(double alpha, const Tolerance& tol = default_threshold_tolerance());

double fundamental_residual(double beta, double alpha);

/// β_w(α) as the root of fundamental_residual in β. α = 1 returns 1.
ThresholdPoint beta_w_fundamental(double alpha, const Tolerance& tol = default_threshold_tolerance());

/// The inverse map: α_w(β) as the root in α. β = 0 returns the limit point (0, 0).
ThresholdPoint alpha_w_fundamental(double beta, const Tolerance& tol = default_threshold_tolerance());

/// (1 − (2/α)M(z)) / (1 + z² − 2M(z)); z is clamped to at least 1e−8.
double amp_state_objective(double z, double alpha);

struct AmpThreshold {
  ThresholdPoint point;
  double z_star = 0.0;  ///< maximizer, the AMP threshold multiplier
};

/// β_w^(amp) = α · max_z amp_state_objective(z, α). A 2048-point log-spaced
/// scan on [1e−4, 50] picks the bracket; the maximizer is then refined as a
/// root of the objective's derivative. α = 1 returns (1, z* = 0).
AmpThreshold beta_w_amp(double alpha, const Tolerance& tol = default_threshold_tolerance());

/// Scalar query dispatch.
ThresholdPoint beta_w(Method method, double alpha, const Tolerance& tol = default_threshold_tolerance());

/// One point per α of a strictly increasing grid in (0, 1]. Throws
/// DomainError for a bad grid and Error naming the α of any failed point or
/// of a monotonicity violation.
ThresholdCurve compute_curve(Method method, const std::vector<double>& alpha_grid,
                             const Tolerance& tol = default_threshold_tolerance());

/// A named way of computing β_w(α), for equivalence checks.
struct Characterization {
  std::string name;
  std::function<ThresholdPoint(double alpha, const Tolerance&)> compute;
};

/// The geometric, fundamental and AMP characterizations.
std::vector<Characterization> standard_characterizations();

struct EquivalenceRow {
  double alpha = 0.0;
  std::vector<std::optional<double>> beta_w;  ///< one per characterization
  double max_deviation = 0.0;                 ///< max pairwise |Δβ_w|
  std::vector<std::string> errors;
};

struct EquivalenceReport {
  std::vector<std::string> names;
  std::vector<EquivalenceRow> rows;
  double threshold = 1e-4;
  double max_deviation = 0.0;
  std::optional<double> worst_alpha;
  bool pass = false;  ///< every row computed and within threshold
};

EquivalenceReport verify_equivalence(const std::vector<double>& alpha_grid,
                                     const std::vector<Characterization>& methods,
                                     double threshold = 1e-4,
                                     const Tolerance& tol = default_threshold_tolerance());

EquivalenceReport verify_equivalence(const std::vector<double>& alpha_grid,
                                     double threshold = 1e-4,
                                     const Tolerance& tol = default_threshold_tolerance());

}  // namespace l1pt

#endif  // L1PT_THRESHOLD_CURVES_HPP
