#include "pbo/preference_model.hpp"

#include <utility>

namespace pbo {

PreferenceModel::PreferenceModel(Domain domain, ModelSettings settings)
    : domain_(std::move(domain)), settings_(std::move(settings)) {
  domain_.validate();
  params_ = initial_params();
}

KernelParams PreferenceModel::initial_params() const {
  KernelParams p = KernelParams::isotropic(2 * domain_.dim(), settings_.init_signal_variance,
                                           settings_.init_lengthscale);
  p.jitter = settings_.jitter;
  return p;
}

DuelDataset PreferenceModel::to_model(const DuelDataset& raw) const {
  if (!raw.empty() && raw.point_dim() != domain_.dim()) {
    throw Error(Errc::invalid_argument, "PreferenceModel: duel dimension does not match the domain");
  }
  DuelDataset out;
  out.inputs.resize(raw.size(), 2 * domain_.dim());
  out.labels = raw.labels;
  const Index q = domain_.dim();
  if (raw.size() > 0) {
    out.inputs.leftCols(q) = domain_.to_unit(raw.inputs.leftCols(q));
    out.inputs.rightCols(q) = domain_.to_unit(raw.inputs.rightCols(q));
  }
  return out;
}

void PreferenceModel::set_params(const KernelParams& params) {
  params.validate(2 * domain_.dim());
  params_ = params;
  posterior_.reset();
}

bool PreferenceModel::reoptimize_due(Index raw_size) const {
  if (raw_size <= settings_.reoptimize_until) return true;
  const Index every = std::max<Index>(settings_.reoptimize_every, 1);
  return (raw_size - settings_.reoptimize_until) % every == 0;
}

std::optional<Vector> PreferenceModel::warm_start_for(const DuelDataset& augmented) const {
  if (!posterior_) return std::nullopt;
  const Index prev = posterior_->size() / 2;
  const Index now = augmented.size() / 2;
  if (prev == 0 || prev > now) return std::nullopt;
  Vector warm = Vector::Zero(2 * now);
  warm.head(prev) = posterior_->mode.head(prev);
  warm.segment(now, prev) = posterior_->mode.segment(prev, prev);
  return warm;
}

void PreferenceModel::fit(const DuelDataset& raw, bool force_reoptimize) {
  raw.validate();
  const DuelDataset augmented = augment_symmetric(to_model(raw));
  if (!augmented.empty() && (force_reoptimize || reoptimize_due(raw.size()))) {
    HyperOptions hyper = settings_.hyper;
    hyper.seed = derive_seed(settings_.hyper.seed, "hyper", static_cast<std::uint64_t>(fits_));
    const HyperFit hf = optimize_hyperparams(augmented, params_, settings_.bounds, hyper);
    params_ = hf.params;
  }
  if (augmented.empty()) {
    posterior_ = prior_posterior(params_);
  } else {
    posterior_ = fit_laplace(augmented, params_, settings_.newton, warm_start_for(augmented));
  }
  last_raw_size_ = raw.size();
  ++fits_;
}

void PreferenceModel::fit_with(const DuelDataset& raw, const KernelParams& params) {
  raw.validate();
  params.validate(2 * domain_.dim());
  params_ = params;
  const DuelDataset augmented = augment_symmetric(to_model(raw));
  posterior_ = augmented.empty()
                   ? prior_posterior(params_)
                   : fit_laplace(augmented, params_, settings_.newton, warm_start_for(augmented));
  last_raw_size_ = raw.size();
  ++fits_;
}

const LaplacePosterior& PreferenceModel::posterior() const {
  if (!posterior_) throw Error(Errc::conflict, "PreferenceModel: not fitted");
  return *posterior_;
}

}  // namespace pbo
