#ifndef PBO_FOURIER_HPP
#define PBO_FOURIER_HPP

#include "pbo/kernel.hpp"
#include "pbo/laplace.hpp"
#include "pbo/types.hpp"

namespace pbo {

/// Random Fourier features for the SE kernel:
///   phi(d) = amplitude * cos(frequencies * d + phases),
/// with frequencies ~ N(0, diag(l^-2)), phases ~ U[0, 2 pi) and
/// amplitude = sqrt(2 s^2 / F), so that E[phi(d)' phi(d')] = k(d, d').
struct FourierBasis {
  Matrix frequencies;  // F x 2q
  Vector phases;       // F
  double amplitude = 0.0;

  Index num_features() const { return phases.size(); }
  Index input_dim() const { return frequencies.cols(); }
  /// Feature matrix for the rows of `inputs` (N x F).
  Matrix features(const Matrix& inputs) const;
};

FourierBasis sample_basis(const KernelParams& params, Index num_features, Rng& rng);

/// A continuous function sample f~(d) = phi(d)' weights.
struct SampledPath {
  FourierBasis basis;
  Vector weights;
  Vector anchors;  // latent values drawn at the training duels (empty for prior paths)

  double operator()(const Eigen::Ref<const Vector>& duel_concat) const;
  Vector evaluate(const Matrix& inputs) const;
  /// values(i, k) = f~([candidate_i, landmark_k]).
  Matrix evaluate_pairs(const Points& candidates, const Points& landmarks) const;
};

inline constexpr double kPathRidge = 1e-6;

/// Draws f_s ~ N(f-hat, (K^-1 + W)^-1) at the training duels, then corrects a
/// prior weight draw by ridge regression so the path passes through f_s:
///   w = w0 + Phi' (Phi Phi' + ridge I)^-1 (f_s - Phi w0).
/// With no training duels the path is a plain prior sample.
SampledPath sample_latent_path(const LaplacePosterior& posterior, FourierBasis basis, Rng& rng,
                               double ridge = kPathRidge);

struct SampledArgmax {
  Index index = 0;
  Vector point;
  Vector scores;  // mean over landmarks of sigma(f~([x, landmark]))
};

SampledArgmax sampled_copeland_argmax(const SampledPath& path, const Points& candidates,
                                      const Points& landmarks);

}  // namespace pbo

#endif  // PBO_FOURIER_HPP
