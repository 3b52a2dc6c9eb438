#include "pbo/kernel.hpp"

#include <string>

namespace pbo {

KernelParams KernelParams::isotropic(Index input_dim, double signal_variance, double lengthscale,
                                     double jitter) {
  KernelParams p;
  p.signal_variance = signal_variance;
  p.lengthscales = Vector::Constant(input_dim, lengthscale);
  p.jitter = jitter;
  return p;
}

void KernelParams::validate(Index input_dim) const {
  if (lengthscales.size() != input_dim) {
    throw Error(Errc::invalid_argument, "kernel: expected " + std::to_string(input_dim) +
                                            " lengthscales, got " + std::to_string(lengthscales.size()));
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw Error(Errc::invalid_argument, "kernel: signal variance must be positive");
  }
  if (!(lengthscales.array() > 0.0).all() || !lengthscales.allFinite()) {
    throw Error(Errc::invalid_argument, "kernel: lengthscales must be positive");
  }
  if (!(jitter > 0.0) || jitter > 1e-4 * signal_variance) {
    throw Error(Errc::invalid_argument, "kernel: jitter must lie in (0, 1e-4 * signal_variance]");
  }
}

Matrix unit_rbf(const Eigen::Ref<const Vector>& lengthscales, const Matrix& A, const Matrix& B) {
  if (A.cols() != lengthscales.size() || B.cols() != lengthscales.size()) {
    throw Error(Errc::invalid_argument, "kernel: dimension mismatch");
  }
  const Vector inv = lengthscales.cwiseInverse();
  const Matrix As = A * inv.asDiagonal();
  const Matrix Bs = B * inv.asDiagonal();
  // |a - b|^2 = |a|^2 + |b|^2 - 2 a.b, clamped against rounding below zero.
  Matrix d2 = -2.0 * As * Bs.transpose();
  d2.colwise() += As.rowwise().squaredNorm();
  d2.rowwise() += Bs.rowwise().squaredNorm().transpose();
  return (-0.5 * d2.array().max(0.0)).exp().matrix();
}

Matrix kernel_matrix(const KernelParams& params, const Matrix& A, const Matrix& B) {
  return params.signal_variance * unit_rbf(params.lengthscales, A, B);
}

Matrix gram_matrix(const KernelParams& params, const Matrix& X) {
  Matrix K = kernel_matrix(params, X, X);
  // Exact symmetry and unit diagonal despite the expanded distance formula.
  K = 0.5 * (K + K.transpose()).eval();
  K.diagonal().setConstant(params.signal_variance + params.jitter);
  return K;
}

}  // namespace pbo
