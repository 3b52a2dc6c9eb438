#include "pbo/fourier.hpp"

#include "pbo/copeland.hpp"
#include "pbo/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace pbo {

Matrix FourierBasis::features(const Matrix& inputs) const {
  if (inputs.cols() != input_dim()) throw Error(Errc::invalid_argument, "features: dimension mismatch");
  Matrix z = inputs * frequencies.transpose();
  z.rowwise() += phases.transpose();
  return amplitude * z.array().cos().matrix();
}

FourierBasis sample_basis(const KernelParams& params, Index num_features, Rng& rng) {
  params.validate(params.input_dim());
  if (num_features <= 0) throw Error(Errc::invalid_argument, "sample_basis: need at least one feature");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
  FourierBasis basis;
  const Index dim = params.input_dim();
  basis.frequencies.resize(num_features, dim);
  basis.phases.resize(num_features);
  for (Index f = 0; f < num_features; ++f) {
    for (Index d = 0; d < dim; ++d) basis.frequencies(f, d) = normal(rng) / params.lengthscales(d);
    basis.phases(f) = unif(rng);
  }
  basis.amplitude = std::sqrt(2.0 * params.signal_variance / static_cast<double>(num_features));
  return basis;
}

double SampledPath::operator()(const Eigen::Ref<const Vector>& duel_concat) const {
  return evaluate(duel_concat.transpose())(0);
}

Vector SampledPath::evaluate(const Matrix& inputs) const { return basis.features(inputs) * weights; }

Matrix SampledPath::evaluate_pairs(const Points& candidates, const Points& landmarks) const {
  const Index q = basis.input_dim() / 2;
  if (candidates.cols() != q || landmarks.cols() != q) {
    throw Error(Errc::invalid_argument, "evaluate_pairs: point dimension mismatch");
  }
  // cos(u + v) = cos u cos v - sin u sin v, with u from the left half and v from the right.
  Matrix u = candidates * basis.frequencies.leftCols(q).transpose();
  u.rowwise() += basis.phases.transpose();
  const Matrix v = landmarks * basis.frequencies.rightCols(q).transpose();
  const Index F = basis.num_features();
  Matrix left(candidates.rows(), 2 * F), right(landmarks.rows(), 2 * F);
  const auto wa = (basis.amplitude * weights).transpose().array();
  left.leftCols(F) = (u.array().cos().rowwise() * wa).matrix();
  left.rightCols(F) = (u.array().sin().rowwise() * wa).matrix();
  right.leftCols(F) = v.array().cos().matrix();
  right.rightCols(F) = -v.array().sin().matrix();
  return left * right.transpose();
}

namespace {

// Symmetric square root factor S with S S' = sigma, clipping negative eigenvalues.
Matrix psd_factor(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) throw Error(Errc::factorization, "sample_latent_path: eigensolver failed");
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

SampledPath sample_latent_path(const LaplacePosterior& posterior, FourierBasis basis, Rng& rng, double ridge) {
  if (basis.input_dim() != posterior.input_dim()) {
    throw Error(Errc::invalid_argument, "sample_latent_path: basis dimension mismatch");
  }
  if (!(ridge > 0)) throw Error(Errc::invalid_argument, "sample_latent_path: ridge must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index F = basis.num_features();
  Vector w0(F);
  for (Index f = 0; f < F; ++f) w0(f) = normal(rng);

  const Index n = posterior.size();
  if (n == 0) return {std::move(basis), std::move(w0), Vector()};

  // Laplace posterior covariance at the training duels: K - K W^1/2 B^-1 W^1/2 K.
  const Matrix K = kernel_matrix(posterior.params, posterior.inputs, posterior.inputs);
  const Matrix C = posterior.chol_lower.triangularView<Eigen::Lower>().solve(posterior.sqrt_w.asDiagonal() * K);
  Matrix sigma = K;
  sigma.noalias() -= C.transpose() * C;
  sigma = 0.5 * (sigma + sigma.transpose());
  Vector z(n);
  for (Index i = 0; i < n; ++i) z(i) = normal(rng);
  const Vector fs = posterior.mode + psd_factor(sigma) * z;

  const Matrix phi = basis.features(posterior.inputs);
  Matrix G = phi * phi.transpose();
  G.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) throw Error(Errc::factorization, "sample_latent_path: ridge system");
  Vector w = w0 + phi.transpose() * llt.solve(fs - phi * w0);
  return {std::move(basis), std::move(w), fs};
}

SampledArgmax sampled_copeland_argmax(const SampledPath& path, const Points& candidates, const Points& landmarks) {
  if (candidates.rows() == 0 || landmarks.rows() == 0) {
    throw Error(Errc::invalid_argument, "sampled_copeland_argmax: empty candidate or landmark set");
  }
  const Matrix values = path.evaluate_pairs(candidates, landmarks);
  SampledArgmax out;
  out.scores = values.unaryExpr([](double v) { return sigmoid(v); }).rowwise().mean();
  out.index = argmax_first(out.scores);
  out.point = candidates.row(out.index).transpose();
  return out;
}

}  // namespace pbo
