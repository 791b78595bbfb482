#include <cmath>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/recovery_solvers.hpp"

namespace l1pt {

namespace {

void require_threshold(double tau) {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw DomainError(fmt::format("threshold must be finite and >= 0, got {}", tau));
  }
}

}  // namespace

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
  require_threshold(tau);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - tau;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

double avg_threshold_derivative(const Eigen::VectorXd& v, double tau) {
  require_threshold(tau);
  if (v.size() == 0) return 0.0;
  const auto active = (v.array().abs() > tau).count();
  return static_cast<double>(active) / static_cast<double>(v.size());
}

}  // namespace l1pt
