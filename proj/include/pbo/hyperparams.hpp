#ifndef PBO_HYPERPARAMS_HPP
#define PBO_HYPERPARAMS_HPP

#include "pbo/kernel.hpp"
#include "pbo/laplace.hpp"

#include <cstdint>
#include <utility>

namespace pbo {

/// Box constraints, applied in log space.
struct HyperBounds {
  std::pair<double, double> signal_variance{0.05, 500.0};
  std::pair<double, double> lengthscale{0.02, 10.0};
};

struct HyperOptions {
  int restarts = 3;          // the initial point plus (restarts - 1) perturbations
  int max_iters = 40;        // per start
  double perturbation = 0.5; // std-dev of log-space perturbations
  double grad_tol = 1e-5;
  std::uint64_t seed = 0;
  /// Share lengthscales between the left and right halves of the duel
  /// vector, which makes the kernel invariant to swapping the duel.
  bool tie_halves = false;
};

struct HyperFit {
  KernelParams params;
  double log_marginal = 0.0;
  double initial_log_marginal = 0.0;
  bool improved = false;  // false: every start failed and `params` is the init
  int evaluations = 0;
};

/// Multi-start projected quasi-Newton ascent of the Laplace evidence.
HyperFit optimize_hyperparams(const DuelDataset& data, const KernelParams& init,
                              const HyperBounds& bounds = {}, const HyperOptions& options = {});

}  // namespace pbo

#endif  // PBO_HYPERPARAMS_HPP
