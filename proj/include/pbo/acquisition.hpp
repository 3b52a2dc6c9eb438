#ifndef PBO_ACQUISITION_HPP
#define PBO_ACQUISITION_HPP

#include "pbo/copeland.hpp"
#include "pbo/fourier.hpp"
#include "pbo/laplace.hpp"
#include "pbo/types.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbo {

enum class Policy { pe, cei, dts, random, sparring };

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view name);
inline bool uses_gp_model(Policy p) { return p == Policy::pe || p == Policy::cei || p == Policy::dts; }

/// A duel between two candidate-grid points, by index.
struct IndexDuel {
  Index left = 0;
  Index right = 0;

  friend bool operator==(const IndexDuel&, const IndexDuel&) = default;
};

/// All n^2 ordered pairs, left index varying slowest.
std::vector<IndexDuel> all_ordered_pairs(Index n);
/// `count` distinct ordered pairs drawn uniformly without replacement, returned
/// in ordered-pair order; all pairs when count >= n^2.
std::vector<IndexDuel> sample_ordered_pairs(Index n, Index count, Rng& rng);

/// Rows [candidates(left), candidates(right)] for each duel.
Matrix duel_inputs(const Points& candidates, std::span<const IndexDuel> duels);

struct AcquisitionChoice {
  IndexDuel indices;
  Duel duel;
  double score = 0.0;
  Policy policy = Policy::pe;
  std::map<std::string, double> diagnostics;
};

/// Duel with the largest V[sigma(f*)].
AcquisitionChoice acq_pure_exploration(const LaplacePosterior& posterior, const Points& candidates,
                                       std::span<const IndexDuel> duels);

/// Soft-Copeland score of the current Condorcet winner.
double condorcet_value(const LaplacePosterior& posterior, const Points& candidates,
                       const LandmarkSet& landmarks);

/// The two fantasized outcomes of one duel and their Copeland expected improvement:
///   pi([x,x']) (c_left - c)_+ + pi([x',x]) (c_right - c)_+.
struct CeiTerm {
  double prob_left = 0.5;    // pi([x, x'])
  double prob_right = 0.5;   // pi([x', x])
  double value_left = 0.0;   // Condorcet value after observing y = 1
  double value_right = 0.0;  // Condorcet value after observing y = 0
  double incumbent = 0.0;
  double cei = 0.0;
};

double cei_closed_form(const CeiTerm& term);

struct CeiOptions {
  /// Append the mirrored duel to each fantasy, matching a model fitted on
  /// symmetric-augmented data.
  bool mirror = true;
  NewtonOptions newton;
};

struct CeiResult {
  AcquisitionChoice choice;
  std::vector<CeiTerm> terms;     // one per candidate duel, in input order
  std::vector<Index> skipped;     // duels whose fantasy refit failed
};

/// Exhaustive one-step lookahead over `duels`. Each fantasy refits the Laplace
/// approximation at the posterior's (frozen) hyperparameters, warm-started from
/// the incumbent mode.
CeiResult acq_cei(const LaplacePosterior& posterior, const Points& candidates,
                  std::span<const IndexDuel> duels, const LandmarkSet& landmarks,
                  const CeiOptions& options = {});

/// Dueling-Thompson sampling: the left point is the Copeland argmax of a fresh
/// continuous posterior sample; the right point maximizes V[sigma(f*)] along
/// the slice [x_next, .], excluding x_next itself.
AcquisitionChoice acq_dts(const LaplacePosterior& posterior, Index num_features,
                          const Points& candidates, const Points& landmarks, Rng& rng);

}  // namespace pbo

#endif  // PBO_ACQUISITION_HPP
