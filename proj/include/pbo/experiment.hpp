#ifndef PBO_EXPERIMENT_HPP
#define PBO_EXPERIMENT_HPP

#include "pbo/acquisition.hpp"
#include "pbo/benchmarks.hpp"
#include "pbo/preference_model.hpp"
#include "pbo/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pbo {

enum class LandmarkMode { grid, uniform };

struct ExperimentConfig {
  BenchmarkId fn = BenchmarkId::forrester;
  Policy policy = Policy::dts;
  int budget = 200;
  int n_init = 5;
  int grid_per_dim = 33;
  int replicates = 20;
  std::uint64_t seed = 0;
  int features = 500;
  LandmarkMode landmarks = LandmarkMode::grid;
  int landmark_count = 100;  // uniform mode only
  /// Candidate duels scored by PE and CEI above 1-D, drawn from the policy
  /// stream each iteration (all ordered pairs in 1-D).
  int cei_pairs = 500;
  /// Worker threads for replicates; 0 uses the hardware concurrency.
  int threads = 0;
  /// Evaluate the Condorcet winner every k-th iteration (plus iterations 0
  /// and `budget`); only evaluated iterations are recorded.
  int winner_every = 1;
  /// Fill `wall_ms`; off by default so that output files are reproducible.
  bool timing = false;
  ModelSettings model;

  void validate() const;
};

struct ExperimentRecord {
  int replicate = 0;
  int iter = 0;
  std::optional<Duel> duel;  // the duel acquired at this iteration (none at iteration 0)
  std::optional<int> y;
  Vector winner;             // x_c in domain coordinates
  double g_winner = 0.0;
  long wall_ms = 0;
};

/// Named sub-streams of one replicate. `init` and `oracle` depend only on
/// (seed, replicate), so every policy sees the same initial duels and outcomes.
struct ReplicateStreams {
  Rng init;
  Rng oracle;
  Rng policy;

  static ReplicateStreams derive(std::uint64_t seed, int replicate);
};

/// One replicate of the optimization loop. Throws on model-fit failure.
std::vector<ExperimentRecord> run_pbo(const ExperimentConfig& config, int replicate,
                                      ReplicateStreams streams);
inline std::vector<ExperimentRecord> run_pbo(const ExperimentConfig& config, int replicate) {
  return run_pbo(config, replicate, ReplicateStreams::derive(config.seed, replicate));
}

struct ReplicateResult {
  int replicate = 0;
  std::vector<ExperimentRecord> records;
  std::optional<std::string> error;
};

struct IterationSummary {
  int iter = 0;
  int count = 0;
  double median = 0.0;
  double mean = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicateResult> replicates;
  std::vector<IterationSummary> summary;

  /// All records of completed replicates, ordered by (replicate, iteration).
  std::vector<ExperimentRecord> records() const;
  std::optional<IterationSummary> at_iteration(int iter) const;
};

/// Replicate r draws its streams from the derived seed (seed + r).
ExperimentResult run_experiment(const ExperimentConfig& config);
std::vector<IterationSummary> summarize(const std::vector<ReplicateResult>& replicates);

}  // namespace pbo

#endif  // PBO_EXPERIMENT_HPP
