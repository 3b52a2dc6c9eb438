#include "pbo/kernel.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace pbo;

namespace {

double se(const KernelParams& p, const Vector& a, const Vector& b) {
  double s = 0;
  for (Index i = 0; i < a.size(); ++i) s += std::pow((a(i) - b(i)) / p.lengthscales(i), 2);
  return p.signal_variance * std::exp(-0.5 * s);
}

}  // namespace

TEST_CASE("kernel matrix matches the pointwise formula") {
  KernelParams p;
  p.signal_variance = 2.5;
  p.lengthscales = Vector(4);
  p.lengthscales << 0.3, 0.7, 0.3, 1.1;
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix A(6, 4), B(5, 4);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = u(rng);
  for (Index i = 0; i < B.size(); ++i) B.data()[i] = u(rng);
  const Matrix K = kernel_matrix(p, A, B);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const Vector a = A.row(i).transpose(), b = B.row(j).transpose();
      CHECK(K(i, j) == doctest::Approx(se(p, a, b)).epsilon(1e-13));
      CHECK(kernel_eval(p, a, b) == doctest::Approx(se(p, a, b)).epsilon(1e-13));
    }
  }
  const Matrix G = gram_matrix(p, A);
  CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(G(2, 2) == doctest::Approx(p.signal_variance + p.jitter));
}

TEST_CASE("kernel factorizes over the duel halves") {
  const KernelParams p = KernelParams::isotropic(2, 1.7, 0.4);
  Matrix A(3, 2), B(4, 2);
  A << 0.1, 0.9, 0.5, 0.5, 0.3, 0.0;
  B << 0.2, 0.2, 0.8, 0.1, 0.0, 1.0, 0.6, 0.4;
  const Vector l = p.lengthscales.head(1), r = p.lengthscales.tail(1);
  const Matrix prod = p.signal_variance *
                      unit_rbf(l, A.leftCols(1), B.leftCols(1)).cwiseProduct(unit_rbf(r, A.rightCols(1), B.rightCols(1)));
  CHECK((prod - kernel_matrix(p, A, B)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("parameter validation") {
  KernelParams p = KernelParams::isotropic(2, 1.0, 0.5);
  CHECK_NOTHROW(p.validate(2));
  CHECK_THROWS_AS(p.validate(4), Error);
  p.jitter = 1e-3;  // larger than 1e-4 of the signal variance
  CHECK_THROWS_AS(p.validate(2), Error);
  p.jitter = 1e-8;
  p.lengthscales(0) = -1;
  CHECK_THROWS_AS(p.validate(2), Error);
  CHECK_THROWS_AS(kernel_eval(KernelParams::isotropic(2, 1, 1), Vector::Zero(3), Vector::Zero(3)), Error);
}

TEST_CASE("gram matrix is positive definite for distinct inputs") {
  const KernelParams p = KernelParams::isotropic(2, 1.0, 0.3);
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix X(30, 2);
  for (Index i = 0; i < X.size(); ++i) X.data()[i] = u(rng);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_matrix(p, X));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}
