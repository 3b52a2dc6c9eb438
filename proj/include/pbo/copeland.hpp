#ifndef PBO_COPELAND_HPP
#define PBO_COPELAND_HPP

#include "pbo/benchmarks.hpp"
#include "pbo/laplace.hpp"
#include "pbo/types.hpp"

#include <cstdint>
#include <optional>

namespace pbo {

struct LandmarkSet {
  enum class Origin { grid, uniform_sample };

  Points points;
  Origin origin = Origin::grid;
  std::optional<std::uint64_t> seed;

  Index size() const { return points.rows(); }
};

/// Every grid point is a landmark, so the Copeland average is an exact grid sum.
LandmarkSet grid_landmarks(const Points& grid);
/// `count` points drawn uniformly from the domain box.
LandmarkSet uniform_landmarks(const Domain& domain, Index count, std::uint64_t seed);

struct CopelandEstimate {
  Points candidates;
  Vector scores;  // in [0, 1]
  Index winner_index = 0;
  double winner_score = 0.0;

  Eigen::VectorXd winner() const { return candidates.row(winner_index).transpose(); }
};

/// Mean over landmarks of the predicted preference of [x, landmark].
double soft_copeland_at(const LaplacePosterior& posterior, const Eigen::Ref<const Vector>& x,
                        const LandmarkSet& landmarks);

/// prefs(i, k) = pi([candidate_i, landmark_k]) under the posterior.
Matrix preference_matrix(const LaplacePosterior& posterior, const Points& candidates,
                         const Points& landmarks);

/// prefs(i, k) = sigma(g(landmark_k) - g(candidate_i)) from the true objective.
Matrix oracle_preference_matrix(BenchmarkId id, const Points& candidates, const Points& landmarks);

/// Row means of `prefs`; the winner is the argmax with lowest-index ties.
CopelandEstimate copeland_from_preferences(const Points& candidates, const Matrix& prefs);

CopelandEstimate condorcet_winner(const LaplacePosterior& posterior, const Points& candidates,
                                  const LandmarkSet& landmarks);

/// Index of the first maximum; NaN entries never win.
Index argmax_first(const Eigen::Ref<const Vector>& values);

}  // namespace pbo

#endif  // PBO_COPELAND_HPP
