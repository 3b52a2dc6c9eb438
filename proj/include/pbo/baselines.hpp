#ifndef PBO_BASELINES_HPP
#define PBO_BASELINES_HPP

#include "pbo/types.hpp"

#include <utility>
#include <vector>

namespace pbo {

/// Two independent members drawn uniformly from the grid, as indices.
std::pair<Index, Index> random_duel_indices(Index grid_size, Rng& rng);
Duel random_duel(const Points& grid, Rng& rng);

/// Wins per grid point over a history of index duels.
class WinCounter {
 public:
  explicit WinCounter(Index n_arms) : wins_(n_arms, 0) {}
  void record(Index left, Index right, int y);
  /// Arm with the most wins, lowest index on ties.
  Index leader() const;
  const std::vector<long>& wins() const { return wins_; }

 private:
  std::vector<long> wins_;
};

/// Sparring: two UCB1 agents over the same arms, one per duel slot. The left
/// agent is rewarded with y, the right agent with 1 - y.
struct SparringState {
  Index n_arms = 0;
  std::vector<long> pulls[2];
  std::vector<double> means[2];
  long t = 0;

  explicit SparringState(Index arms = 0);
};

/// UCB1 choice per agent; unpulled arms come first, in index order.
std::pair<Index, Index> sparring_select(const SparringState& state);
/// Index of the UCB1 arm of one agent (0 = left, 1 = right).
Index ucb_arm(const SparringState& state, int agent);
void sparring_update(SparringState& state, Index arm_left, Index arm_right, int y);
/// The left agent's most-pulled arm, lowest index on ties.
Index sparring_recommend(const SparringState& state);

}  // namespace pbo

#endif  // PBO_BASELINES_HPP
