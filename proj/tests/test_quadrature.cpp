#include "pbo/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pbo;

namespace {

// Composite Simpson over +-14 standard deviations.
std::pair<double, double> dense_moments(double mean, double var) {
  const double sd = std::sqrt(var);
  const int n = 40000;
  const double a = mean - 14 * sd, b = mean + 14 * sd, h = (b - a) / n;
  double m1 = 0, m2 = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    const double phi = std::exp(-0.5 * (x - mean) * (x - mean) / var) / (sd * std::sqrt(2 * std::numbers::pi));
    const double s = 1.0 / (1.0 + std::exp(-x));
    m1 += w * s * phi;
    m2 += w * s * s * phi;
  }
  return {m1 * h / 3, m2 * h / 3};
}

}  // namespace

TEST_CASE("sigmoid is stable in both tails") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(log_sigmoid(-800.0)));
  CHECK(log_sigmoid(-800.0) == doctest::Approx(-800.0));
  CHECK(log_sigmoid(2.0) == doctest::Approx(std::log(sigmoid(2.0))));
}

TEST_CASE("Gauss-Hermite and Gauss-Laguerre rules integrate polynomials exactly") {
  const QuadratureRule& gh = gauss_hermite(20);
  double m0 = 0, m2 = 0, m4 = 0;
  for (Index i = 0; i < gh.nodes.size(); ++i) {
    const double x = gh.nodes[i];
    m0 += gh.weights[i];
    m2 += gh.weights[i] * x * x;
    m4 += gh.weights[i] * x * x * x * x;
  }
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));

  const QuadratureRule& gl = gauss_laguerre(20);
  double l0 = 0, l3 = 0;
  for (Index i = 0; i < gl.nodes.size(); ++i) {
    l0 += gl.weights[i];
    l3 += gl.weights[i] * std::pow(gl.nodes[i], 3);
  }
  CHECK(l0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l3 == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("zero variance gives the plug-in value") {
  const SigmoidMoments m = sigmoid_gaussian_moments(0.7, 0.0);
  CHECK(m.mean == sigmoid(0.7));
  CHECK(m.variance() == 0.0);
}

TEST_CASE("moments match dense integration across widths") {
  for (const double mean : {-6.0, -1.5, 0.0, 0.4, 3.0, 9.0}) {
    for (const double sd : {0.05, 0.5, 1.0, 1.3, 1.4, 2.0, 4.0, 8.0, 20.0}) {
      CAPTURE(mean);
      CAPTURE(sd);
      const auto [m1, m2] = dense_moments(mean, sd * sd);
      const SigmoidMoments m = sigmoid_gaussian_moments(mean, sd * sd);
      CHECK(std::abs(m.mean - m1) < 1e-6);
      CHECK(std::abs(m.second - m2) < 1e-6);
      CHECK(m.variance() <= m.mean * (1 - m.mean) + 1e-15);
    }
  }
}

TEST_CASE("symmetry of the preference under mean reflection") {
  for (const double sd : {0.3, 1.0, 3.0, 10.0}) {
    const double a = sigmoid_gaussian_moments(1.2, sd * sd).mean;
    const double b = sigmoid_gaussian_moments(-1.2, sd * sd).mean;
    CHECK(a + b == doctest::Approx(1.0).epsilon(1e-12));
  }
}
