#ifndef L1PT_TESTS_ORACLES_HPP
#define L1PT_TESTS_ORACLES_HPP

// Slow reference computations in long double, sharing no code with the
// library.

#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

using ld = long double;

inline constexpr ld kPi = 3.141592653589793238462643383279502884L;

// Plain bisection; f(lo) and f(hi) must differ in sign.
inline ld bisect(const std::function<ld(ld)>& f, ld lo, ld hi, int iters = 200) {
  ld flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const ld mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    const ld fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

inline ld erfinv(ld p) {
  if (p < 0) return -erfinv(-p);
  if (p > 0.5L) {
    const ld q = 1.0L - p;
    return bisect([q](ld x) { return std::erfc(x) - q; }, 0.0L, 30.0L);
  }
  return bisect([p](ld x) { return std::erf(x) - p; }, 0.0L, 30.0L);
}

inline ld density(ld s) { return std::exp(-0.5L * s * s) / std::sqrt(2.0L * kPi); }

// Upper Gaussian tail by composite Simpson on [s, s + 14].
inline ld tail_quadrature(ld s, int intervals = 200000) {
  const ld h = 14.0L / intervals;
  ld sum = density(s) + density(s + 14.0L);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0L : 2.0L) * density(s + i * h);
  return sum * h / 3.0L;
}

// (1/n) log binom(n, k) through lgamma.
inline ld log_binomial_rate(ld n, ld k) {
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / n;
}

inline ld fundamental(ld beta, ld alpha) {
  const ld e = erfinv((1.0L - alpha) / (1.0L - beta));
  return (1.0L - beta) * std::sqrt(2.0L / kPi) * std::exp(-e * e) / alpha - std::sqrt(2.0L) * e;
}

inline ld beta_w(ld alpha) {
  return bisect([alpha](ld b) { return fundamental(b, alpha); }, 1e-12L, alpha - 1e-12L, 120);
}

inline ld amp_objective(ld z, ld alpha) {
  const ld tail = 0.5L * std::erfc(z / std::sqrt(2.0L));
  const ld m = (1 + z * z) * tail - z * density(z);
  return (1 - (2 / alpha) * m) / (1 + z * z - 2 * m);
}

}  // namespace oracle

#endif  // L1PT_TESTS_ORACLES_HPP
