#include "pbo/benchmarks.hpp"

#include "pbo/quadrature.hpp"

#include <limits>
#include <string>

namespace pbo {

std::string_view to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::forrester: return "forrester";
    case BenchmarkId::six_hump_camel: return "six-hump-camel";
    case BenchmarkId::goldstein_price: return "goldstein-price";
    case BenchmarkId::levy: return "levy";
  }
  return "unknown";
}

BenchmarkId parse_benchmark(std::string_view name) {
  for (const auto id : kAllBenchmarks) {
    if (to_string(id) == name) return id;
  }
  throw Error(Errc::invalid_argument, "unknown benchmark '" + std::string(name) + "'");
}

Domain canonical_domain(BenchmarkId id, int grid_per_dim) {
  Domain d;
  switch (id) {
    case BenchmarkId::forrester: d.bounds = {{0.0, 1.0}}; break;
    case BenchmarkId::six_hump_camel: d.bounds = {{-2.0, 2.0}, {-1.0, 1.0}}; break;
    case BenchmarkId::goldstein_price: d.bounds = {{-2.0, 2.0}, {-2.0, 2.0}}; break;
    case BenchmarkId::levy: d.bounds = {{-10.0, 10.0}, {-10.0, 10.0}}; break;
  }
  d.grid_per_dim = grid_per_dim;
  d.validate();
  return d;
}

double eval_objective(BenchmarkId id, const Eigen::Ref<const Vector>& x) {
  const Domain domain = canonical_domain(id);
  if (x.size() != domain.dim()) {
    throw Error(Errc::invalid_argument, std::string(to_string(id)) + ": expected a point of dimension " +
                                            std::to_string(domain.dim()));
  }
  if (!domain.contains(x)) {
    throw Error(Errc::out_of_domain, std::string(to_string(id)) + ": point outside the canonical domain");
  }
  switch (id) {
    case BenchmarkId::forrester: return forrester(x);
    case BenchmarkId::six_hump_camel: return six_hump_camel(x);
    case BenchmarkId::goldstein_price: return goldstein_price(x);
    case BenchmarkId::levy: return levy(x);
  }
  throw Error(Errc::invalid_argument, "unknown benchmark");
}

Index grid_size(const Domain& domain) {
  if (!domain.grid_per_dim) throw Error(Errc::invalid_argument, "make_grid: grid_per_dim not set");
  constexpr Index kMaxGrid = Index{1} << 26;
  Index total = 1;
  for (Index i = 0; i < domain.dim(); ++i) {
    if (total > kMaxGrid / *domain.grid_per_dim) {
      throw Error(Errc::invalid_argument, "make_grid: grid size overflow");
    }
    total *= *domain.grid_per_dim;
  }
  return total;
}

Points make_grid(const Domain& domain) {
  domain.validate();
  const Index total = grid_size(domain);
  const Index q = domain.dim();
  const Index n = *domain.grid_per_dim;

  std::vector<Vector> axes;
  for (Index j = 0; j < q; ++j) {
    const auto [lo, hi] = domain.bounds[j];
    Vector axis(n);
    for (Index i = 0; i < n; ++i) axis(i) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    axis(n - 1) = hi;
    axes.push_back(std::move(axis));
  }

  Points grid(total, q);
  for (Index r = 0; r < total; ++r) {
    Index rem = r;
    for (Index j = q - 1; j >= 0; --j) {
      grid(r, j) = axes[j](rem % n);
      rem /= n;
    }
  }
  return grid;
}

double true_preference_prob(BenchmarkId id, const Duel& duel) {
  // Negative gaps are mirrored through 1 - sigma(-z); the subtraction is exact
  // for sigma(-z) >= 1/2, so swapped duels sum to exactly one.
  const double z = eval_objective(id, duel.right) - eval_objective(id, duel.left);
  return z >= 0 ? sigmoid(z) : 1.0 - sigmoid(-z);
}

DuelOutcome sample_duel_outcome(BenchmarkId id, const Duel& duel, Rng& rng) {
  const double p = true_preference_prob(id, duel);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return DuelOutcome{duel, unif(rng) < p ? 1 : 0};
}

}  // namespace pbo
