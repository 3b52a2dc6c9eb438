#ifndef PBO_KERNEL_HPP
#define PBO_KERNEL_HPP

#include "pbo/types.hpp"

#include <Eigen/Core>

#include <cmath>

namespace pbo {

/// Squared-exponential kernel over concatenated duel vectors [x, x'].
struct KernelParams {
  double signal_variance = 1.0;
  Vector lengthscales;  // one per concatenated coordinate (2q)
  double jitter = 1e-8;

  static KernelParams isotropic(Index input_dim, double signal_variance, double lengthscale,
                                double jitter = 1e-8);

  Index input_dim() const { return lengthscales.size(); }
  void validate(Index input_dim) const;
};

/// k(a, b) = s^2 exp(-1/2 sum ((a_i - b_i) / l_i)^2). No jitter.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kernel_eval(const KernelParams& params, const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != params.lengthscales.size() || b.size() != params.lengthscales.size()) {
    throw Error(Errc::invalid_argument, "kernel_eval: dimension mismatch");
  }
  using std::exp;
  const auto scaled = ((a.derived() - b.derived()).array() /
                       params.lengthscales.template cast<Scalar>().array());
  return Scalar(params.signal_variance) * exp(Scalar(-0.5) * scaled.square().sum());
}

/// Cross-covariance between the rows of A and the rows of B (no jitter).
Matrix kernel_matrix(const KernelParams& params, const Matrix& A, const Matrix& B);

/// Training covariance of the rows of X with jitter on the diagonal.
Matrix gram_matrix(const KernelParams& params, const Matrix& X);

/// exp(-1/2 sum ((a_i - b_i) / l_i)^2) between rows, without signal variance.
/// Used for one half of the duel vector, where the SE kernel factorizes.
Matrix unit_rbf(const Eigen::Ref<const Vector>& lengthscales, const Matrix& A, const Matrix& B);

}  // namespace pbo

#endif  // PBO_KERNEL_HPP
