#ifndef PBO_BENCHMARKS_HPP
#define PBO_BENCHMARKS_HPP

#include "pbo/types.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

namespace pbo {

enum class BenchmarkId { forrester, six_hump_camel, goldstein_price, levy };

inline constexpr std::array<BenchmarkId, 4> kAllBenchmarks = {
    BenchmarkId::forrester, BenchmarkId::six_hump_camel, BenchmarkId::goldstein_price,
    BenchmarkId::levy};

std::string_view to_string(BenchmarkId id);
/// Accepts the lowercase identifiers `forrester`, `six-hump-camel`, `goldstein-price`, `levy`.
BenchmarkId parse_benchmark(std::string_view name);

/// Canonical box of each benchmark, discretized with `grid_per_dim` points per axis.
Domain canonical_domain(BenchmarkId id, int grid_per_dim = 33);

// Closed forms, templated on the scalar type so they also work with
// autodiff or extended-precision scalars.

template <typename Derived>
typename Derived::Scalar forrester(const Eigen::MatrixBase<Derived>& x) {
  using std::sin;
  const auto t = x(0);
  return (6 * t - 2) * (6 * t - 2) * sin(12 * t - 4);
}

template <typename Derived>
typename Derived::Scalar six_hump_camel(const Eigen::MatrixBase<Derived>& x) {
  const auto a = x(0);
  const auto b = x(1);
  const auto a2 = a * a;
  const auto b2 = b * b;
  return (4 - 2.1 * a2 + a2 * a2 / 3) * a2 + a * b + (-4 + 4 * b2) * b2;
}

template <typename Derived>
typename Derived::Scalar goldstein_price(const Eigen::MatrixBase<Derived>& x) {
  const auto a = x(0);
  const auto b = x(1);
  const auto s = a + b + 1;
  const auto d = 2 * a - 3 * b;
  const auto p1 = 1 + s * s * (19 - 14 * a + 3 * a * a - 14 * b + 6 * a * b + 3 * b * b);
  const auto p2 = 30 + d * d * (18 - 32 * a + 12 * a * a + 48 * b - 36 * a * b + 27 * b * b);
  return p1 * p2;
}

template <typename Derived>
typename Derived::Scalar levy(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using std::sin;
  const Scalar pi = std::numbers::pi_v<double>;
  const Index d = x.size();
  auto w = [&](Index i) { return Scalar(1) + (x(i) - Scalar(1)) / Scalar(4); };
  const Scalar s0 = sin(pi * w(0));
  Scalar total = s0 * s0;
  for (Index i = 0; i + 1 < d; ++i) {
    const Scalar wi = w(i);
    const Scalar si = sin(pi * wi + 1);
    total += (wi - 1) * (wi - 1) * (1 + 10 * si * si);
  }
  const Scalar wd = w(d - 1);
  const Scalar sd = sin(2 * pi * wd);
  total += (wd - 1) * (wd - 1) * (1 + sd * sd);
  return total;
}

/// g(x) for a benchmark; throws when x lies outside the canonical box.
double eval_objective(BenchmarkId id, const Eigen::Ref<const Vector>& x);

/// Cartesian grid with `grid_per_dim` equally spaced points per axis,
/// endpoints included, last coordinate varying fastest.
Points make_grid(const Domain& domain);
Index grid_size(const Domain& domain);

/// sigma(g(right) - g(left)): probability that the left point wins.
double true_preference_prob(BenchmarkId id, const Duel& duel);

/// Bernoulli draw of the duel outcome; consumes exactly one uniform variate.
DuelOutcome sample_duel_outcome(BenchmarkId id, const Duel& duel, Rng& rng);

}  // namespace pbo

#endif  // PBO_BENCHMARKS_HPP
