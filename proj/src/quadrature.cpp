#include "pbo/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace pbo {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix,
// weights are mu0 times the squared first components of its eigenvectors.
QuadratureRule golub_welsch(const Vector& diag, const Vector& offdiag, double mu0) {
  const Index n = diag.size();
  Matrix jacobi = Matrix::Zero(n, n);
  jacobi.diagonal() = diag;
  for (Index i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = offdiag(i);
    jacobi(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = mu0 * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

template <typename Build>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& m, int n, Build build) {
  if (n < 1) throw Error(Errc::invalid_argument, "quadrature: need at least one node");
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex m;
  return cached(cache, m, n, [](int k) {
    Vector diag = Vector::Zero(k);
    Vector off(std::max(k - 1, 0));
    for (int i = 1; i < k; ++i) off(i - 1) = std::sqrt(i / 2.0);
    return golub_welsch(diag, off, std::sqrt(std::numbers::pi));
  });
}

const QuadratureRule& gauss_laguerre(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex m;
  return cached(cache, m, n, [](int k) {
    Vector diag(k);
    Vector off(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) diag(i) = 2.0 * i + 1.0;
    for (int i = 1; i < k; ++i) off(i - 1) = i;
    return golub_welsch(diag, off, 1.0);
  });
}

SigmoidMoments sigmoid_gaussian_moments(double mean, double var) {
  if (!(var > 0.0)) {
    const double s = sigmoid(mean);
    return {s, s * s};
  }
  const double sd = std::sqrt(var);
  SigmoidMoments m{0.0, 0.0};

  if (sd <= kSplitThreshold) {
    const QuadratureRule& gh = gauss_hermite(kQuadratureNodes);
    const double scale = std::sqrt(2.0) * sd;
    for (Index i = 0; i < gh.nodes.size(); ++i) {
      const double s = sigmoid(mean + scale * gh.nodes(i));
      m.mean += gh.weights(i) * s;
      m.second += gh.weights(i) * s * s;
    }
    m.mean /= std::sqrt(std::numbers::pi);
    m.second /= std::sqrt(std::numbers::pi);
    return m;
  }

  // sigma(f)^p = H(f) + [sigma(f)^p - H(f)]; the bracket decays like e^{-|f|}.
  const QuadratureRule& gl = gauss_laguerre(kQuadratureNodes);
  const double inv_norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto density = [&](double f) {
    const double z = (f - mean) / sd;
    return inv_norm * std::exp(-0.5 * z * z);
  };
  const double step = 0.5 * std::erfc(-mean / (sd * std::sqrt(2.0)));
  double pos1 = 0.0, neg1 = 0.0, pos2 = 0.0, neg2 = 0.0;
  for (Index i = 0; i < gl.nodes.size(); ++i) {
    const double x = gl.nodes(i);
    const double w = gl.weights(i);
    const double s = sigmoid(x);
    // f > 0: 1 - sigma = e^{-f} sigma(f), 1 - sigma^2 = e^{-f} sigma(f) (1 + sigma(f)).
    pos1 += w * s * density(x);
    pos2 += w * s * (1.0 + s) * density(x);
    // f < 0, t = -f: sigma(-t) = e^{-t} sigma(t); sigma(-t)^2 = e^{-2t} sigma(t)^2.
    neg1 += w * s * density(-x);
    const double h = sigmoid(0.5 * x);
    neg2 += 0.5 * w * h * h * density(-0.5 * x);
  }
  m.mean = step - pos1 + neg1;
  m.second = step - pos2 + neg2;
  return m;
}

}  // namespace pbo
