#ifndef L1PT_SPECIAL_FUNCTIONS_HPP
#define L1PT_SPECIAL_FUNCTIONS_HPP

#include <functional>
#include <utility>

namespace l1pt {

/// Stopping rule shared by the scalar solvers.
struct Tolerance {
  double abs_tol = 1e-12;  ///< bound on |f(x)| for root finding
  double rel_tol = 1e-14;  ///< bound on bracket width relative to |x|
  int max_iter = 200;

  /// Throws DomainError unless abs_tol > 0, rel_tol >= 0, max_iter >= 1.
  void validate() const;

  /// Same limits with both tolerances divided by `factor`.
  Tolerance tightened(double factor) const;
};

struct Bracket {
  double lo;
  double hi;

  /// Throws DomainError unless lo < hi and both are finite.
  void validate() const;
};

using ScalarFunction = std::function<double(double)>;

/// Upper Gaussian tail, (1/sqrt(2 pi)) * integral from s to infinity of
/// exp(-x^2/2). Computed through erfc so there is no cancellation for large s.
double gaussian_tail(double s);

/// Standard normal density.
double gaussian_density(double s);

/// Mills ratio gaussian_tail(s) / gaussian_density(s) for s >= 0, finite for
/// arguments where both factors underflow.
double mills_ratio(double s);

double erf(double x);
double erfc(double x);

/// Inverse of erf on (-1, 1). Throws DomainError for |p| >= 1.
double erfinv(double p);

/// Binary entropy in nats with H(0) = H(1) = 0.
double entropy(double p);

/// Safeguarded bracketing root finder (Brent). Requires f(lo) * f(hi) <= 0.
///
/// Stops when |f(x)| <= abs_tol or the bracket has shrunk below
/// rel_tol * |x| (or to adjacent doubles). Throws BracketError when the
/// endpoints do not straddle a root and ConvergenceError after max_iter.
double find_root(const ScalarFunction& f, Bracket bracket, const Tolerance& tol);

struct Minimum {
  double argmin;
  double value;
};

/// Brent's golden-section/parabolic minimizer. Assumes f is unimodal on the
/// bracket; a boundary minimizer is returned when f is monotone.
Minimum minimize_1d(const ScalarFunction& f, Bracket bracket, const Tolerance& tol);

}  // namespace l1pt

#endif  // L1PT_SPECIAL_FUNCTIONS_HPP
