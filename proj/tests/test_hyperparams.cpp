#include "pbo/hyperparams.hpp"
#include "pbo/preference_model.hpp"
#include "pbo/quadrature.hpp"

#include <doctest.h>

using namespace pbo;

namespace {

DuelDataset forrester_like(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DuelDataset data(1);
  for (Index i = 0; i < n; ++i) {
    const double a = u(rng), b = u(rng);
    const double z = 4.0 * (std::sin(6 * b) - std::sin(6 * a));
    data.add(Duel{Vector::Constant(1, a), Vector::Constant(1, b)}, u(rng) < sigmoid(z) ? 1 : 0);
  }
  return data;
}

}  // namespace

TEST_CASE("optimization never returns a worse evidence than the start") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DuelDataset data = augment_symmetric(forrester_like(20, seed));
    const KernelParams init = KernelParams::isotropic(2, 1.0, 0.25);
    HyperOptions opt;
    opt.tie_halves = true;
    const HyperFit fit = optimize_hyperparams(data, init, {}, opt);
    const double start = fit_laplace(data, init).log_marginal;
    const double end = fit_laplace(data, fit.params).log_marginal;
    CHECK(end >= start - 1e-9);
    CHECK(fit.log_marginal == doctest::Approx(end).epsilon(1e-6));
    CHECK(fit.params.lengthscales(0) == fit.params.lengthscales(1));
  }
}

TEST_CASE("results stay inside the bounds") {
  const DuelDataset data = augment_symmetric(forrester_like(25, 9));
  HyperBounds bounds;
  bounds.signal_variance = {0.5, 2.0};
  bounds.lengthscale = {0.2, 0.3};
  const HyperFit fit = optimize_hyperparams(data, KernelParams::isotropic(2, 1.0, 0.25), bounds);
  CHECK(fit.params.signal_variance >= 0.5 - 1e-12);
  CHECK(fit.params.signal_variance <= 2.0 + 1e-12);
  CHECK(fit.params.lengthscales.minCoeff() >= 0.2 - 1e-12);
  CHECK(fit.params.lengthscales.maxCoeff() <= 0.3 + 1e-12);
}

TEST_CASE("optimization is deterministic for a fixed seed") {
  const DuelDataset data = augment_symmetric(forrester_like(15, 4));
  HyperOptions opt;
  opt.seed = 42;
  const HyperFit a = optimize_hyperparams(data, KernelParams::isotropic(2, 1.0, 0.25), {}, opt);
  const HyperFit b = optimize_hyperparams(data, KernelParams::isotropic(2, 1.0, 0.25), {}, opt);
  CHECK(a.params.signal_variance == b.params.signal_variance);
  CHECK(a.params.lengthscales == b.params.lengthscales);
}

TEST_CASE("invalid bounds and odd tied dimensions are rejected") {
  const DuelDataset data = forrester_like(5, 1);
  HyperBounds bad;
  bad.lengthscale = {1.0, 0.5};
  CHECK_THROWS_AS(optimize_hyperparams(data, KernelParams::isotropic(2, 1, 0.3), bad), Error);
}

TEST_CASE("preference model schedule and coordinates") {
  const Domain domain{{{-2.0, 2.0}}, 33};
  PreferenceModel model(domain);
  CHECK(model.reoptimize_due(5));
  CHECK(model.reoptimize_due(25));
  CHECK_FALSE(model.reoptimize_due(26));
  CHECK(model.reoptimize_due(30));
  CHECK_FALSE(model.fitted());
  CHECK_THROWS_AS(model.posterior(), Error);

  DuelDataset raw(1);
  raw.add(Duel{Vector::Constant(1, -2.0), Vector::Constant(1, 2.0)}, 1);
  raw.add(Duel{Vector::Constant(1, 0.0), Vector::Constant(1, 1.0)}, 0);
  const DuelDataset unit = model.to_model(raw);
  CHECK(unit.inputs(0, 0) == 0.0);
  CHECK(unit.inputs(0, 1) == 1.0);
  CHECK(unit.inputs(1, 0) == 0.5);
  model.fit(raw);
  CHECK(model.fitted());
  CHECK(model.posterior().size() == 4);
}

TEST_CASE("explicit parameters bypass optimization") {
  const Domain domain{{{0.0, 1.0}}, 33};
  PreferenceModel model(domain);
  const DuelDataset raw = forrester_like(10, 5);
  KernelParams p = KernelParams::isotropic(2, 3.0, 0.1);
  model.fit_with(raw, p);
  CHECK(model.params().signal_variance == 3.0);
  CHECK(model.posterior().params.lengthscales(0) == 0.1);
}
