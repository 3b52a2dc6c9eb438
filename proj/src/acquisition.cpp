#include "pbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace pbo {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::pe: return "pe";
    case Policy::cei: return "cei";
    case Policy::dts: return "dts";
    case Policy::random: return "random";
    case Policy::sparring: return "sparring";
  }
  return "unknown";
}

Policy parse_policy(std::string_view name) {
  for (const Policy p : {Policy::pe, Policy::cei, Policy::dts, Policy::random, Policy::sparring}) {
    if (to_string(p) == name) return p;
  }
  throw Error(Errc::invalid_argument, "unknown policy '" + std::string(name) + "'");
}

std::vector<IndexDuel> all_ordered_pairs(Index n) {
  std::vector<IndexDuel> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out.push_back({i, j});
  }
  return out;
}

std::vector<IndexDuel> sample_ordered_pairs(Index n, Index count, Rng& rng) {
  const Index total = n * n;
  if (count >= total) return all_ordered_pairs(n);
  if (count <= 0) return {};
  // Floyd's algorithm: `count` distinct codes out of [0, total).
  std::set<Index> chosen;
  for (Index j = total - count; j < total; ++j) {
    std::uniform_int_distribution<Index> pick(0, j);
    const Index t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<IndexDuel> out;
  out.reserve(chosen.size());
  for (const Index code : chosen) out.push_back({code / n, code % n});
  return out;
}

Matrix duel_inputs(const Points& candidates, std::span<const IndexDuel> duels) {
  const Index q = candidates.cols();
  Matrix X(static_cast<Index>(duels.size()), 2 * q);
  for (std::size_t i = 0; i < duels.size(); ++i) {
    const Index r = static_cast<Index>(i);
    X.row(r).head(q) = candidates.row(duels[i].left);
    X.row(r).tail(q) = candidates.row(duels[i].right);
  }
  return X;
}

namespace {

void check_duels(const Points& candidates, std::span<const IndexDuel> duels) {
  if (duels.empty()) throw Error(Errc::invalid_argument, "acquisition: no candidate duels");
  for (const IndexDuel& d : duels) {
    if (d.left < 0 || d.right < 0 || d.left >= candidates.rows() || d.right >= candidates.rows()) {
      throw Error(Errc::invalid_argument, "acquisition: duel index out of range");
    }
  }
}

AcquisitionChoice make_choice(const Points& candidates, IndexDuel idx, double score, Policy policy) {
  AcquisitionChoice c;
  c.indices = idx;
  c.duel = Duel{candidates.row(idx.left).transpose(), candidates.row(idx.right).transpose()};
  c.score = score;
  c.policy = policy;
  return c;
}

Vector var_sigma_of(const LaplacePosterior& posterior, const Matrix& inputs) {
  const LatentBatch lat = predict_latent_batch(posterior, inputs);
  Vector out(inputs.rows());
  for (Index i = 0; i < out.size(); ++i) out(i) = preference_from_latent(lat.mean(i), lat.var(i)).var_sigma;
  return out;
}

}  // namespace

AcquisitionChoice acq_pure_exploration(const LaplacePosterior& posterior, const Points& candidates,
                                       std::span<const IndexDuel> duels) {
  check_duels(candidates, duels);
  const Vector vs = var_sigma_of(posterior, duel_inputs(candidates, duels));
  const Index best = argmax_first(vs);
  return make_choice(candidates, duels[static_cast<std::size_t>(best)], vs(best), Policy::pe);
}

double condorcet_value(const LaplacePosterior& posterior, const Points& candidates,
                       const LandmarkSet& landmarks) {
  return condorcet_winner(posterior, candidates, landmarks).winner_score;
}

double cei_closed_form(const CeiTerm& t) {
  return t.prob_left * std::max(t.value_left - t.incumbent, 0.0) +
         t.prob_right * std::max(t.value_right - t.incumbent, 0.0);
}

namespace {

double fantasy_value(const LaplacePosterior& posterior, const DuelDataset& base, const Vector& warm,
                     const Vector& duel, int y, const Points& candidates, const LandmarkSet& landmarks,
                     const CeiOptions& options) {
  DuelDataset data = base;
  data.add(duel, y);
  if (options.mirror) {
    const Index q = duel.size() / 2;
    Vector mirrored(duel.size());
    mirrored << duel.tail(q), duel.head(q);
    data.add(mirrored, 1 - y);
  }
  Vector start = Vector::Zero(data.size());
  start.head(warm.size()) = warm;
  const LaplacePosterior fantasy = fit_laplace(data, posterior.params, options.newton, start);
  return condorcet_value(fantasy, candidates, landmarks);
}

}  // namespace

CeiResult acq_cei(const LaplacePosterior& posterior, const Points& candidates, std::span<const IndexDuel> duels,
                  const LandmarkSet& landmarks, const CeiOptions& options) {
  check_duels(candidates, duels);
  const double incumbent = condorcet_value(posterior, candidates, landmarks);
  DuelDataset base;
  base.inputs = posterior.inputs;
  base.labels = posterior.labels;

  const Matrix X = duel_inputs(candidates, duels);
  const Index q = candidates.cols();
  Matrix Xs(X.rows(), X.cols());
  Xs.leftCols(q) = X.rightCols(q);
  Xs.rightCols(q) = X.leftCols(q);
  const LatentBatch fwd = predict_latent_batch(posterior, X);
  const LatentBatch rev = predict_latent_batch(posterior, Xs);

  CeiResult result;
  result.terms.resize(duels.size());
  Vector scores(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    CeiTerm& t = result.terms[static_cast<std::size_t>(i)];
    t.incumbent = incumbent;
    t.prob_left = preference_from_latent(fwd.mean(i), fwd.var(i)).prob;
    t.prob_right = preference_from_latent(rev.mean(i), rev.var(i)).prob;
    try {
      const Vector duel = X.row(i).transpose();
      t.value_left = fantasy_value(posterior, base, posterior.mode, duel, 1, candidates, landmarks, options);
      t.value_right = fantasy_value(posterior, base, posterior.mode, duel, 0, candidates, landmarks, options);
      t.cei = cei_closed_form(t);
      scores(i) = t.cei;
    } catch (const Error&) {
      t.cei = std::numeric_limits<double>::quiet_NaN();
      scores(i) = t.cei;
      result.skipped.push_back(i);
    }
  }
  if (result.skipped.size() == duels.size()) {
    throw Error(Errc::convergence, "acq_cei: every fantasy refit failed");
  }
  const Index best = argmax_first(scores);
  result.choice = make_choice(candidates, duels[static_cast<std::size_t>(best)], scores(best), Policy::cei);
  result.choice.diagnostics["incumbent"] = incumbent;
  result.choice.diagnostics["skipped"] = static_cast<double>(result.skipped.size());
  return result;
}

AcquisitionChoice acq_dts(const LaplacePosterior& posterior, Index num_features, const Points& candidates,
                          const Points& landmarks, Rng& rng) {
  if (candidates.rows() == 0) throw Error(Errc::invalid_argument, "acq_dts: no candidates");
  FourierBasis basis = sample_basis(posterior.params, num_features, rng);
  const SampledPath path = sample_latent_path(posterior, std::move(basis), rng);
  const SampledArgmax top = sampled_copeland_argmax(path, candidates, landmarks);

  const Index n = candidates.rows();
  const Index next = top.index;
  if (n == 1) {
    AcquisitionChoice c = make_choice(candidates, {next, next}, 0.0, Policy::dts);
    c.diagnostics["sample_copeland"] = top.scores(next);
    return c;
  }
  std::vector<IndexDuel> slice;
  slice.reserve(static_cast<std::size_t>(n - 1));
  for (Index j = 0; j < n; ++j) {
    if (j != next) slice.push_back({next, j});
  }
  const Vector vs = var_sigma_of(posterior, duel_inputs(candidates, slice));
  const Index best = argmax_first(vs);
  AcquisitionChoice c = make_choice(candidates, slice[static_cast<std::size_t>(best)], vs(best), Policy::dts);
  c.diagnostics["sample_copeland"] = top.scores(next);
  return c;
}

}  // namespace pbo
