#include "pbo/baselines.hpp"

#include <cmath>

namespace pbo {

std::pair<Index, Index> random_duel_indices(Index grid_size, Rng& rng) {
  if (grid_size <= 0) throw Error(Errc::invalid_argument, "random_duel: empty grid");
  std::uniform_int_distribution<Index> pick(0, grid_size - 1);
  const Index a = pick(rng);
  const Index b = pick(rng);
  return {a, b};
}

Duel random_duel(const Points& grid, Rng& rng) {
  const auto [a, b] = random_duel_indices(grid.rows(), rng);
  return Duel{grid.row(a).transpose(), grid.row(b).transpose()};
}

void WinCounter::record(Index left, Index right, int y) {
  const auto n = static_cast<Index>(wins_.size());
  if (left < 0 || right < 0 || left >= n || right >= n) {
    throw Error(Errc::invalid_argument, "WinCounter: arm index out of range");
  }
  if (y != 0 && y != 1) throw Error(Errc::invalid_argument, "WinCounter: label must be 0 or 1");
  ++wins_[static_cast<std::size_t>(y == 1 ? left : right)];
}

Index WinCounter::leader() const {
  if (wins_.empty()) throw Error(Errc::invalid_argument, "WinCounter: no arms");
  std::size_t best = 0;
  for (std::size_t i = 1; i < wins_.size(); ++i) {
    if (wins_[i] > wins_[best]) best = i;
  }
  return static_cast<Index>(best);
}

SparringState::SparringState(Index arms) : n_arms(arms) {
  if (arms < 0) throw Error(Errc::invalid_argument, "SparringState: negative arm count");
  for (int a = 0; a < 2; ++a) {
    pulls[a].assign(static_cast<std::size_t>(arms), 0);
    means[a].assign(static_cast<std::size_t>(arms), 0.0);
  }
}

Index ucb_arm(const SparringState& state, int agent) {
  if (state.n_arms <= 0) throw Error(Errc::invalid_argument, "ucb_arm: no arms");
  const auto& pulls = state.pulls[agent];
  const auto& means = state.means[agent];
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    if (pulls[i] == 0) return static_cast<Index>(i);
  }
  const double log_t = std::log(static_cast<double>(std::max<long>(state.t, 1)));
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    const double value = means[i] + std::sqrt(2.0 * log_t / static_cast<double>(pulls[i]));
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return static_cast<Index>(best);
}

std::pair<Index, Index> sparring_select(const SparringState& state) {
  return {ucb_arm(state, 0), ucb_arm(state, 1)};
}

void sparring_update(SparringState& state, Index arm_left, Index arm_right, int y) {
  if (arm_left < 0 || arm_right < 0 || arm_left >= state.n_arms || arm_right >= state.n_arms) {
    throw Error(Errc::invalid_argument, "sparring_update: arm index out of range");
  }
  if (y != 0 && y != 1) throw Error(Errc::invalid_argument, "sparring_update: label must be 0 or 1");
  const Index arms[2] = {arm_left, arm_right};
  const double rewards[2] = {static_cast<double>(y), static_cast<double>(1 - y)};
  for (int a = 0; a < 2; ++a) {
    const auto i = static_cast<std::size_t>(arms[a]);
    const long n = ++state.pulls[a][i];
    state.means[a][i] += (rewards[a] - state.means[a][i]) / static_cast<double>(n);
  }
  ++state.t;
}

Index sparring_recommend(const SparringState& state) {
  if (state.n_arms <= 0) throw Error(Errc::invalid_argument, "sparring_recommend: no arms");
  const auto& pulls = state.pulls[0];
  std::size_t best = 0;
  for (std::size_t i = 1; i < pulls.size(); ++i) {
    if (pulls[i] > pulls[best]) best = i;
  }
  return static_cast<Index>(best);
}

}  // namespace pbo
