#ifndef PBO_LAPLACE_HPP
#define PBO_LAPLACE_HPP

#include "pbo/kernel.hpp"
#include "pbo/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <optional>

namespace pbo {

/// Gaussian approximation to the GP-classification posterior over the latent
/// duel reward f at the training duels, centred at the posterior mode.
///
/// With K the training covariance and W = -d^2 log p(y|f) / df^2 at the mode,
/// the factor holds the Cholesky decomposition of B = I + W^1/2 K W^1/2.
/// Predictions at a test duel with cross-covariance k* are
///   mean = k*' grad_loglik,   var = k** - |L^-1 W^1/2 k*|^2.
struct LaplacePosterior {
  Matrix inputs;            // N x 2q training duels
  Eigen::VectorXi labels;   // N
  KernelParams params;
  Vector mode;              // f-hat
  Vector hessian_diag;      // W
  Vector sqrt_w;            // W^1/2
  Vector grad_loglik;       // d log p(y|f) / df at the mode
  Matrix chol_lower;        // L with L L' = B
  double log_marginal = 0.0;
  double grad_norm = 0.0;   // max-norm of the log-posterior gradient at the mode
  int iterations = 0;

  Index size() const { return labels.size(); }
  Index input_dim() const { return params.input_dim(); }
  Index point_dim() const { return input_dim() / 2; }
};

struct NewtonOptions {
  double mode_tol = 1e-6;
  int max_iters = 100;
};

/// Newton iterations on the log posterior, from f = 0 unless a warm start is given.
LaplacePosterior fit_laplace(const DuelDataset& data, const KernelParams& params,
                             const NewtonOptions& options = {},
                             const std::optional<Vector>& warm_start = std::nullopt);

/// Posterior with no observations: predictions revert to the prior.
LaplacePosterior prior_posterior(const KernelParams& params);

/// Mode after one more Newton step from the stored mode (fixed-point check).
Vector newton_step(const LaplacePosterior& posterior);

struct LatentPrediction {
  double mean = 0.0;
  double var = 0.0;
};

LatentPrediction predict_latent(const LaplacePosterior& posterior,
                                const Eigen::Ref<const Vector>& duel_concat);

struct PreferencePrediction {
  double latent_mean = 0.0;
  double latent_var = 0.0;
  double prob = 0.5;        // E[sigma(f*)], the preference for the left point
  double var_sigma = 0.0;   // V[sigma(f*)]
  double var_y = 0.25;      // prob (1 - prob)
};

PreferencePrediction preference_from_latent(double mean, double var);
PreferencePrediction predict_preference(const LaplacePosterior& posterior,
                                        const Eigen::Ref<const Vector>& duel_concat);
inline PreferencePrediction predict_preference(const LaplacePosterior& posterior, const Duel& duel) {
  return predict_preference(posterior, duel.concat());
}

/// Latent means and variances for the rows of `test` (each a 2q duel vector).
struct LatentBatch {
  Vector mean;
  Vector var;
};
LatentBatch predict_latent_batch(const LaplacePosterior& posterior, const Matrix& test);

/// Laplace log evidence and its gradient with respect to
/// [log signal_variance, log lengthscale_1, ..., log lengthscale_2q].
struct EvidenceGradient {
  double value = 0.0;
  Vector gradient;
};
EvidenceGradient log_marginal_and_grad(const DuelDataset& data, const KernelParams& params,
                                       const NewtonOptions& options = {},
                                       const std::optional<Vector>& warm_start = std::nullopt);
EvidenceGradient log_marginal_and_grad(const LaplacePosterior& posterior);

/// The original duels in order, followed by the mirror ([b,a], 1 - y) of
/// each of them in the same order.
DuelDataset augment_symmetric(const DuelDataset& data);

}  // namespace pbo

#endif  // PBO_LAPLACE_HPP
