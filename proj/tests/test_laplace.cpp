#include "pbo/laplace.hpp"
#include "pbo/quadrature.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace pbo;

namespace {

DuelDataset random_dataset(Index n, Index q, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DuelDataset data(q);
  for (Index i = 0; i < n; ++i) {
    Vector x(2 * q);
    for (Index d = 0; d < 2 * q; ++d) x(d) = u(rng);
    // Preference for smaller coordinate sums, with noise.
    const double z = 3.0 * (x.tail(q).sum() - x.head(q).sum());
    data.add(x, u(rng) < sigmoid(z) ? 1 : 0);
  }
  return data;
}

KernelParams random_params(Index q, Rng& rng) {
  std::uniform_real_distribution<double> sv(0.5, 3.0), ls(0.2, 1.0);
  KernelParams p;
  p.signal_variance = sv(rng);
  p.lengthscales = Vector(2 * q);
  for (Index d = 0; d < 2 * q; ++d) p.lengthscales(d) = ls(rng);
  p.jitter = 1e-8;
  return p;
}

// Reference Laplace fit with explicit inverses.
struct Dense {
  Vector mode;
  Vector w;
  double log_marginal;
  Matrix K;
};

Dense dense_laplace(const DuelDataset& data, const KernelParams& p) {
  const Matrix K = gram_matrix(p, data.inputs);
  const Matrix Kinv = K.inverse();
  const Index n = data.size();
  Vector f = Vector::Zero(n), w(n), g(n);
  for (int it = 0; it < 200; ++it) {
    for (Index i = 0; i < n; ++i) {
      const double s = sigmoid(f(i));
      g(i) = data.labels(i) - s;
      w(i) = s * (1 - s);
    }
    const Matrix H = Kinv + Matrix(w.asDiagonal());
    const Vector next = H.inverse() * (w.cwiseProduct(f) + g);
    if ((next - f).cwiseAbs().maxCoeff() < 1e-13) {
      f = next;
      break;
    }
    f = next;
  }
  double ll = 0;
  for (Index i = 0; i < n; ++i) {
    const double s = sigmoid(f(i));
    w(i) = s * (1 - s);
    ll += data.labels(i) == 1 ? std::log(s) : std::log(1 - s);
  }
  const Matrix IKW = Matrix::Identity(n, n) + K * w.asDiagonal();
  const double lm = ll - 0.5 * f.dot(Kinv * f) - 0.5 * std::log(IKW.determinant());
  return {f, w, lm, K};
}

}  // namespace

TEST_CASE("mode, evidence and predictions match a dense reference") {
  Rng rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const Index q = 1 + rep % 2;
    const DuelDataset data = random_dataset(12, q, rng);
    const KernelParams p = random_params(q, rng);
    const LaplacePosterior post = fit_laplace(data, p, {1e-12, 200});
    const Dense ref = dense_laplace(data, p);
    CHECK((post.mode - ref.mode).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(post.log_marginal == doctest::Approx(ref.log_marginal).epsilon(1e-9));

    Vector x(2 * q);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index d = 0; d < 2 * q; ++d) x(d) = u(rng);
    const Vector ks = kernel_matrix(p, data.inputs, x.transpose());
    const double mean = ks.dot(ref.K.inverse() * ref.mode);
    const Matrix C = ref.K + Matrix(ref.w.cwiseInverse().asDiagonal());
    const double var = p.signal_variance - ks.dot(C.inverse() * ks);
    const LatentPrediction lat = predict_latent(post, x);
    CHECK(lat.mean == doctest::Approx(mean).epsilon(1e-8));
    CHECK(lat.var == doctest::Approx(var).epsilon(1e-8));
  }
}

TEST_CASE("mode is a fixed point of the Newton update") {
  Rng rng(4);
  const DuelDataset data = random_dataset(15, 2, rng);
  const LaplacePosterior post = fit_laplace(data, random_params(2, rng));
  CHECK(post.grad_norm < 1e-6);
  CHECK((newton_step(post) - post.mode).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("evidence gradient matches central differences") {
  Rng rng(77);
  const NewtonOptions tight{1e-12, 200};
  for (int rep = 0; rep < 6; ++rep) {
    const Index q = 1 + rep % 2;
    const DuelDataset data = random_dataset(10, q, rng);
    const KernelParams p = random_params(q, rng);
    const EvidenceGradient eg = log_marginal_and_grad(data, p, tight);
    const double h = 1e-5;
    for (Index k = 0; k <= 2 * q; ++k) {
      KernelParams up = p, dn = p;
      if (k == 0) {
        up.signal_variance *= std::exp(h);
        dn.signal_variance *= std::exp(-h);
      } else {
        up.lengthscales(k - 1) *= std::exp(h);
        dn.lengthscales(k - 1) *= std::exp(-h);
      }
      const double fd = (fit_laplace(data, up, tight).log_marginal - fit_laplace(data, dn, tight).log_marginal) / (2 * h);
      CAPTURE(k);
      CHECK(std::abs(fd - eg.gradient(k)) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("empty data reverts to the prior") {
  const KernelParams p = KernelParams::isotropic(2, 2.0, 0.5);
  const LaplacePosterior prior = prior_posterior(p);
  const LatentPrediction lat = predict_latent(prior, Vector::Zero(2));
  CHECK(lat.mean == 0.0);
  CHECK(lat.var == 2.0);
  const PreferencePrediction pr = predict_preference(prior, Duel{Vector::Zero(1), Vector::Ones(1)});
  CHECK(pr.prob == doctest::Approx(0.5));
}

TEST_CASE("all-identical labels still converge") {
  DuelDataset data(1);
  for (int i = 0; i < 8; ++i) data.add(Duel{Vector::Constant(1, 0.1 * i), Vector::Constant(1, 0.9)}, 1);
  const LaplacePosterior post = fit_laplace(data, KernelParams::isotropic(2, 1.0, 0.3));
  CHECK(post.grad_norm < 1e-6);
  CHECK(post.mode.minCoeff() > 0.0);
}

TEST_CASE("warm start reaches the same mode") {
  Rng rng(8);
  const DuelDataset data = random_dataset(20, 1, rng);
  const KernelParams p = random_params(1, rng);
  const LaplacePosterior cold = fit_laplace(data, p);
  const LaplacePosterior warm = fit_laplace(data, p, {}, Vector(cold.mode.array() + 0.3));
  CHECK((cold.mode - warm.mode).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(warm.log_marginal == doctest::Approx(cold.log_marginal).epsilon(1e-9));
}

TEST_CASE("argument checks") {
  Rng rng(1);
  const DuelDataset data = random_dataset(5, 1, rng);
  CHECK_THROWS_AS(fit_laplace(data, KernelParams::isotropic(4, 1, 1)), Error);
  CHECK_THROWS_AS(fit_laplace(data, KernelParams::isotropic(2, 1, 1), {}, Vector::Zero(3)), Error);
  const LaplacePosterior post = fit_laplace(data, KernelParams::isotropic(2, 1, 1));
  CHECK_THROWS_AS(predict_latent(post, Vector::Zero(3)), Error);
}

TEST_CASE("symmetric augmentation appends mirrored duels") {
  DuelDataset data(1);
  data.add(Duel{Vector::Constant(1, 0.1), Vector::Constant(1, 0.7)}, 1);
  data.add(Duel{Vector::Constant(1, 0.4), Vector::Constant(1, 0.2)}, 0);
  const DuelDataset aug = augment_symmetric(data);
  REQUIRE(aug.size() == 4);
  CHECK(aug.inputs(2, 0) == 0.7);
  CHECK(aug.inputs(2, 1) == 0.1);
  CHECK(aug.labels(2) == 0);
  CHECK(aug.labels(3) == 1);
  CHECK(aug.inputs.topRows(2) == data.inputs);
}

TEST_CASE("mirror consistency with tied lengthscales") {
  Rng rng(12);
  const DuelDataset data = augment_symmetric(random_dataset(15, 2, rng));
  KernelParams p = KernelParams::isotropic(4, 1.5, 0.4);
  p.lengthscales << 0.3, 0.6, 0.3, 0.6;
  const LaplacePosterior post = fit_laplace(data, p);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Duel d{Vector::NullaryExpr(2, [&](Index) { return u(rng); }),
                 Vector::NullaryExpr(2, [&](Index) { return u(rng); })};
    const PreferencePrediction a = predict_preference(post, d);
    const PreferencePrediction b = predict_preference(post, d.swapped());
    CHECK(std::abs(a.prob + b.prob - 1.0) < 1e-6);
    CHECK(a.var_sigma <= a.var_y + 1e-15);
  }
}

TEST_CASE("batched predictions equal single predictions") {
  Rng rng(3);
  const DuelDataset data = random_dataset(9, 1, rng);
  const LaplacePosterior post = fit_laplace(data, random_params(1, rng));
  Matrix T(7, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index i = 0; i < T.size(); ++i) T.data()[i] = u(rng);
  const LatentBatch b = predict_latent_batch(post, T);
  for (Index i = 0; i < 7; ++i) {
    const LatentPrediction s = predict_latent(post, T.row(i).transpose());
    CHECK(b.mean(i) == doctest::Approx(s.mean).epsilon(1e-14));
    CHECK(b.var(i) == doctest::Approx(s.var).epsilon(1e-14));
  }
}
