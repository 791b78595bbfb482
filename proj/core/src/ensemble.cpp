#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

namespace l1pt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view version() { return L1PT_VERSION; }

std::string_view to_string(NonzeroLaw law) {
  return law == NonzeroLaw::Rademacher ? "rademacher" : "standard-normal";
}

NonzeroLaw nonzero_law_from_string(std::string_view name) {
  if (name == "standard-normal" || name == "normal") return NonzeroLaw::StandardNormal;
  if (name == "rademacher") return NonzeroLaw::Rademacher;
  throw DomainError(fmt::format("unknown nonzero law '{}'", name));
}

int EnsembleSpec::m() const { return static_cast<int>(std::lround(alpha * n)); }
int EnsembleSpec::k() const { return static_cast<int>(std::lround(beta * n)); }

void EnsembleSpec::validate() const {
  if (n < 1) throw SpecError(fmt::format("ensemble: n must be >= 1, got {}", n));
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw SpecError(fmt::format("ensemble: alpha must lie in (0, 1], got {}", alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw SpecError(fmt::format("ensemble: beta must lie in [0, 1], got {}", beta));
  }
  if (m() < 1) throw SpecError(fmt::format("ensemble: m = round({}*{}) is 0", alpha, n));
  if (k() > m()) throw SpecError(fmt::format("ensemble: k={} exceeds m={}", k(), m()));
}

std::uint64_t trial_seed(std::uint64_t master_seed, double alpha, double beta,
                         std::uint64_t trial_index) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(alpha));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(beta));
  return splitmix64(h ^ trial_index);
}

ProblemInstance sample_planted(int n, int m, int k, NonzeroLaw law, std::uint64_t stream_seed) {
  if (n < 1 || m < 1 || m > n || k < 0 || k > m) {
    throw SpecError(fmt::format("sample: invalid sizes n={} m={} k={}", n, m, k));
  }
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  }

  // partial Fisher-Yates for the support
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<int> support(idx.begin(), idx.begin() + k);
  std::sort(support.begin(), support.end());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::bernoulli_distribution coin(0.5);
  for (const int j : support) {
    const double sign = coin(rng) ? 1.0 : -1.0;
    double mag = 1.0;
    if (law == NonzeroLaw::StandardNormal) {
      do {
        mag = std::abs(gauss(rng));
      } while (mag == 0.0);
    }
    x[j] = sign * mag;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  for (const int j : support) y += x[j] * a.col(j);

  ProblemInstance out;
  out.matrix = std::move(a);
  out.measurements = std::move(y);
  out.truth = std::move(x);
  out.sparsity = k;
  out.seed = stream_seed;
  return out;
}

ProblemInstance sample_instance(const EnsembleSpec& spec, std::uint64_t trial_index) {
  spec.validate();
  return sample_planted(spec.n, spec.m(), spec.k(), spec.nonzero_law,
                        trial_seed(spec.master_seed, spec.alpha, spec.beta, trial_index));
}

RunOptions::RunOptions() { amp.max_iter = 3000; }

}  // namespace l1pt
