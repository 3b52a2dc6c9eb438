#ifndef PBO_PREFERENCE_MODEL_HPP
#define PBO_PREFERENCE_MODEL_HPP

#include "pbo/hyperparams.hpp"
#include "pbo/kernel.hpp"
#include "pbo/laplace.hpp"
#include "pbo/types.hpp"

#include <optional>

namespace pbo {

struct ModelSettings {
  double init_signal_variance = 1.0;
  double init_lengthscale = 0.25;  // in unit-cube coordinates
  double jitter = 1e-8;
  HyperBounds bounds;
  HyperOptions hyper{.tie_halves = true};
  NewtonOptions newton;
  /// Hyperparameters are re-optimized at every fit while the number of raw
  /// duels is at most `reoptimize_until`, then every `reoptimize_every` duels.
  Index reoptimize_until = 25;
  Index reoptimize_every = 5;
};

/// The GP preference model as the optimization loop uses it: raw duels in
/// domain coordinates are mapped to the unit cube, mirrored with
/// augment_symmetric, and fitted by Laplace with scheduled hyperparameter
/// refits.
class PreferenceModel {
 public:
  PreferenceModel(Domain domain, ModelSettings settings = {});

  /// Refits on `raw`. Hyperparameters are re-optimized when the schedule
  /// says so or when `force_reoptimize` is set.
  void fit(const DuelDataset& raw, bool force_reoptimize = false);
  /// Refit with explicitly given hyperparameters (no optimization).
  void fit_with(const DuelDataset& raw, const KernelParams& params);

  /// Starting point for the next optimization, or the parameters used by
  /// fits that skip it. Drops the current posterior.
  void set_params(const KernelParams& params);

  bool reoptimize_due(Index raw_size) const;
  bool fitted() const { return posterior_.has_value(); }

  const LaplacePosterior& posterior() const;
  const KernelParams& params() const { return params_; }
  const Domain& domain() const { return domain_; }
  const ModelSettings& settings() const { return settings_; }

  Points to_model(const Points& points) const { return domain_.to_unit(points); }
  DuelDataset to_model(const DuelDataset& raw) const;
  KernelParams initial_params() const;

 private:
  std::optional<Vector> warm_start_for(const DuelDataset& augmented) const;

  Domain domain_;
  ModelSettings settings_;
  KernelParams params_;
  std::optional<LaplacePosterior> posterior_;
  Index last_raw_size_ = 0;
  int fits_ = 0;
};

}  // namespace pbo

#endif  // PBO_PREFERENCE_MODEL_HPP
