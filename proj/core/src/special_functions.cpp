#include "l1pt/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "l1pt/errors.hpp"

namespace l1pt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;
constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215451716881012586580;

void require_finite(double x, const char* op) {
  if (!std::isfinite(x)) {
    throw DomainError(fmt::format("{}: argument must be finite, got {}", op, x));
  }
}

// Giles' single-precision polynomial, good to ~1e-7 relative; refined by Newton.
double erfinv_seed(double a, double q) {
  // a = |p|, q = 1 - a (exact for a >= 0.5)
  double w = -std::log(q * (1.0 + a));
  double r;
  if (w < 5.0) {
    w -= 2.5;
    r = 2.81022636e-08;
    r = 3.43273939e-07 + r * w;
    r = -3.5233877e-06 + r * w;
    r = -4.39150654e-06 + r * w;
    r = 0.00021858087 + r * w;
    r = -0.00125372503 + r * w;
    r = -0.00417768164 + r * w;
    r = 0.246640727 + r * w;
    r = 1.50140941 + r * w;
  } else {
    w = std::sqrt(w) - 3.0;
    r = -0.000200214257;
    r = 0.000100950558 + r * w;
    r = 0.00134934322 + r * w;
    r = -0.00367342844 + r * w;
    r = 0.00573950773 + r * w;
    r = -0.0076224613 + r * w;
    r = 0.00943887047 + r * w;
    r = 1.00167406 + r * w;
    r = 2.83297682 + r * w;
  }
  return r * a;
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_iter < 1) {
    throw DomainError(fmt::format(
        "invalid tolerance: abs_tol={} rel_tol={} max_iter={}", abs_tol, rel_tol, max_iter));
  }
}

Tolerance Tolerance::tightened(double factor) const {
  return Tolerance{abs_tol / factor, rel_tol / factor, max_iter};
}

void Bracket::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError(fmt::format("invalid bracket [{}, {}]", lo, hi));
  }
}

double gaussian_tail(double s) {
  require_finite(s, "gaussian_tail");
  return 0.5 * std::erfc(s * std::numbers::sqrt2 * 0.5);
}

double gaussian_density(double s) {
  require_finite(s, "gaussian_density");
  return kInvSqrt2Pi * std::exp(-0.5 * s * s);
}

double mills_ratio(double s) {
  require_finite(s, "mills_ratio");
  if (s < 0.0) {
    throw DomainError(fmt::format("mills_ratio: s must be >= 0, got {}", s));
  }
  if (s < 5.0) {
    return gaussian_tail(s) / gaussian_density(s);
  }
  // R(s) = 1/(s+ 1/(s+ 2/(s+ 3/(s+ ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = s;
  double c = s;
  double d = 0.0;
  for (int j = 1; j < 1000; ++j) {
    const double a = static_cast<double>(j);
    d = s + a * d;
    if (d == 0.0) d = tiny;
    c = s + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 0.5 * kEps) break;
  }
  return 1.0 / f;
}

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double erfc(double x) {
  require_finite(x, "erfc");
  return std::erfc(x);
}

double erfinv(double p) {
  if (!std::isfinite(p) || !(std::abs(p) < 1.0)) {
    throw DomainError(fmt::format("erfinv: argument must lie in (-1, 1), got {}", p));
  }
  if (p == 0.0) return 0.0;
  const double a = std::abs(p);
  const double q = 1.0 - a;
  double x = erfinv_seed(a, q);
  // Newton on erf near the origin; in the tail, where 1 - a carries all the
  // information, Newton on log erfc, which is close to linear there.
  const bool tail = a > 0.5;
  const double log_q = tail ? std::log(q) : 0.0;
  for (int it = 0; it < 40; ++it) {
    const double slope = kTwoOverSqrtPi * std::exp(-x * x);
    double step;
    if (tail) {
      const double r = std::erfc(x);
      step = -(std::log(r) - log_q) * r / slope;
    } else {
      step = (std::erf(x) - a) / slope;
    }
    x -= step;
    if (std::abs(step) <= 4.0 * kEps * std::abs(x)) break;
  }
  return std::copysign(x, p);
}

double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(fmt::format("entropy: p must lie in [0, 1], got {}", p));
  }
  const double q = 1.0 - p;
  auto term = [](double v) { return v > 0.0 ? -v * std::log(v) : 0.0; };
  return term(p) + term(q);
}

double find_root(const ScalarFunction& f, Bracket bracket, const Tolerance& tol) {
  bracket.validate();
  tol.validate();

  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw DomainError(fmt::format("find_root: f not finite on bracket [{}, {}]", a, b));
  }
  if (std::abs(fa) <= tol.abs_tol && std::abs(fa) <= std::abs(fb)) return a;
  if (std::abs(fb) <= tol.abs_tol) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError(fmt::format(
        "find_root: no sign change on [{}, {}] (f = {}, {})", a, b, fa, fb));
  }

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int it = 0; it < tol.max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double width_tol =
        std::max({tol.rel_tol * std::abs(b), 2.0 * kEps * std::abs(b),
                  std::numeric_limits<double>::denorm_min()});
    const double half = 0.5 * (c - b);
    if (std::abs(fb) <= tol.abs_tol || std::abs(half) <= 0.5 * width_tol) {
      return b;
    }

    if (std::abs(e) >= 0.5 * width_tol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * half * q - std::abs(0.5 * width_tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > 0.5 * width_tol) {
      b += d;
    } else {
      b += std::copysign(0.5 * width_tol, half);
    }
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw DomainError(fmt::format("find_root: f({}) is not finite", b));
    }
  }
  throw ConvergenceError(
      fmt::format("find_root: no convergence after {} iterations", tol.max_iter), b);
}

Minimum minimize_1d(const ScalarFunction& f, Bracket bracket, const Tolerance& tol) {
  bracket.validate();
  tol.validate();

  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  const double sqrt_eps = std::sqrt(kEps);
  double lo = bracket.lo;
  double hi = bracket.hi;
  double x = lo + golden * (hi - lo);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  bool converged = false;
  for (int it = 0; it < tol.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = std::max(tol.rel_tol, sqrt_eps) * std::abs(x) + tol.abs_tol;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (hi - lo)) {
      converged = true;
      break;
    }
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, w, x).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (lo - x) && p < q * (hi - x)) {
        d = p / q;
        const double u = x + d;
        if (u - lo < tol2 || hi - u < tol2) d = std::copysign(tol1, mid - x);
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < mid) ? hi - x : lo - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) {
        hi = x;
      } else {
        lo = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        lo = u;
      } else {
        hi = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (!converged) {
    throw ConvergenceError(
        fmt::format("minimize_1d: no convergence after {} iterations", tol.max_iter), x);
  }

  // Brent never samples the endpoints; a monotone f has its minimum there.
  Minimum best{x, fx};
  for (double edge : {bracket.lo, bracket.hi}) {
    const double fe = f(edge);
    if (fe < best.value) best = Minimum{edge, fe};
  }
  return best;
}

}  // namespace l1pt
