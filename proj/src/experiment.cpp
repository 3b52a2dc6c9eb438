#include "pbo/experiment.hpp"

#include "pbo/baselines.hpp"
#include "pbo/copeland.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <thread>

namespace pbo {

void ExperimentConfig::validate() const {
  if (budget < 0) throw Error(Errc::invalid_argument, "budget must be non-negative");
  if (n_init < 1) throw Error(Errc::invalid_argument, "n_init must be at least 1");
  if (replicates < 1) throw Error(Errc::invalid_argument, "replicates must be at least 1");
  if (grid_per_dim < 2) throw Error(Errc::invalid_argument, "grid_per_dim must be at least 2");
  if (features < 1) throw Error(Errc::invalid_argument, "features must be at least 1");
  if (landmark_count < 1) throw Error(Errc::invalid_argument, "landmark_count must be at least 1");
  if (cei_pairs < 1) throw Error(Errc::invalid_argument, "cei_pairs must be at least 1");
  if (winner_every < 1) throw Error(Errc::invalid_argument, "winner_every must be at least 1");
  if (threads < 0) throw Error(Errc::invalid_argument, "threads must be non-negative");
}

ReplicateStreams ReplicateStreams::derive(std::uint64_t seed, int replicate) {
  const std::uint64_t root = seed + static_cast<std::uint64_t>(replicate);
  return {make_stream(root, "init-duels"), make_stream(root, "oracle"), make_stream(root, "policy")};
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<IndexDuel> candidate_duels(Index grid_n, Index dim, int pairs, Rng& rng) {
  if (dim == 1) return all_ordered_pairs(grid_n);
  return sample_ordered_pairs(grid_n, pairs, rng);
}

}  // namespace

std::vector<ExperimentRecord> run_pbo(const ExperimentConfig& config, int replicate, ReplicateStreams streams) {
  config.validate();
  const Domain domain = canonical_domain(config.fn, config.grid_per_dim);
  const Points grid = make_grid(domain);
  const Points unit_grid = domain.to_unit(grid);
  const Index n_grid = grid.rows();
  const Index dim = domain.dim();
  const std::uint64_t root = config.seed + static_cast<std::uint64_t>(replicate);
  const auto start = Clock::now();

  const LandmarkSet landmarks =
      config.landmarks == LandmarkMode::grid
          ? grid_landmarks(unit_grid)
          : LandmarkSet{domain.to_unit(uniform_landmarks(domain, config.landmark_count,
                                                         derive_seed(root, "landmarks")).points),
                        LandmarkSet::Origin::uniform_sample, derive_seed(root, "landmarks")};

  DuelDataset data(dim);
  std::vector<IndexDuel> history;
  auto observe = [&](IndexDuel d) {
    const Duel duel{grid.row(d.left).transpose(), grid.row(d.right).transpose()};
    const DuelOutcome out = sample_duel_outcome(config.fn, duel, streams.oracle);
    data.add(duel, out.y);
    history.push_back(d);
    return out.y;
  };
  for (int i = 0; i < config.n_init; ++i) {
    const auto [a, b] = random_duel_indices(n_grid, streams.init);
    observe({a, b});
  }

  const bool gp = uses_gp_model(config.policy);
  ModelSettings settings = config.model;
  settings.hyper.seed = derive_seed(root, "hyper");
  PreferenceModel model(domain, settings);
  WinCounter wins(n_grid);
  for (std::size_t i = 0; i < history.size(); ++i) {
    wins.record(history[i].left, history[i].right, data.labels(static_cast<Index>(i)));
  }
  SparringState sparring(n_grid);

  auto winner_index = [&]() -> Index {
    switch (config.policy) {
      case Policy::random: return wins.leader();
      case Policy::sparring: return sparring_recommend(sparring);
      default: return condorcet_winner(model.posterior(), unit_grid, landmarks).winner_index;
    }
  };

  std::vector<ExperimentRecord> records;
  auto record = [&](int iter, std::optional<IndexDuel> duel, std::optional<int> y) {
    const bool due = iter == 0 || iter == config.budget || iter % config.winner_every == 0;
    if (!due) return;
    ExperimentRecord r;
    r.replicate = replicate;
    r.iter = iter;
    if (duel) r.duel = Duel{grid.row(duel->left).transpose(), grid.row(duel->right).transpose()};
    r.y = y;
    const Index w = winner_index();
    r.winner = grid.row(w).transpose();
    r.g_winner = eval_objective(config.fn, r.winner);
    if (config.timing) {
      r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    }
    records.push_back(std::move(r));
  };

  if (gp) model.fit(data);
  record(0, std::nullopt, std::nullopt);

  for (int j = 1; j <= config.budget; ++j) {
    IndexDuel next;
    switch (config.policy) {
      case Policy::random: {
        const auto [a, b] = random_duel_indices(n_grid, streams.policy);
        next = {a, b};
        break;
      }
      case Policy::sparring: {
        const auto [a, b] = sparring_select(sparring);
        next = {a, b};
        break;
      }
      case Policy::pe: {
        const auto duels = candidate_duels(n_grid, dim, config.cei_pairs, streams.policy);
        next = acq_pure_exploration(model.posterior(), unit_grid, duels).indices;
        break;
      }
      case Policy::cei: {
        const auto duels = candidate_duels(n_grid, dim, config.cei_pairs, streams.policy);
        next = acq_cei(model.posterior(), unit_grid, duels, landmarks).choice.indices;
        break;
      }
      case Policy::dts:
        next = acq_dts(model.posterior(), config.features, unit_grid, landmarks.points, streams.policy).indices;
        break;
    }
    const int y = observe(next);
    wins.record(next.left, next.right, y);
    if (config.policy == Policy::sparring) sparring_update(sparring, next.left, next.right, y);
    if (gp) model.fit(data);
    record(j, next, y);
  }
  return records;
}

std::vector<ExperimentRecord> ExperimentResult::records() const {
  std::vector<ExperimentRecord> out;
  for (const ReplicateResult& r : replicates) {
    if (!r.error) out.insert(out.end(), r.records.begin(), r.records.end());
  }
  return out;
}

std::optional<IterationSummary> ExperimentResult::at_iteration(int iter) const {
  for (const IterationSummary& s : summary) {
    if (s.iter == iter) return s;
  }
  return std::nullopt;
}

std::vector<IterationSummary> summarize(const std::vector<ReplicateResult>& replicates) {
  std::map<int, std::vector<double>> by_iter;
  for (const ReplicateResult& r : replicates) {
    if (r.error) continue;
    for (const ExperimentRecord& rec : r.records) by_iter[rec.iter].push_back(rec.g_winner);
  }
  std::vector<IterationSummary> out;
  for (auto& [iter, values] : by_iter) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    IterationSummary s;
    s.iter = iter;
    s.count = static_cast<int>(n);
    s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double total = 0.0;
    for (const double v : values) total += v;
    s.mean = total / static_cast<double>(n);
    out.push_back(s);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.replicates.resize(static_cast<std::size_t>(config.replicates));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < config.replicates; r = next++) {
      ReplicateResult& slot = result.replicates[static_cast<std::size_t>(r)];
      slot.replicate = r;
      try {
        slot.records = run_pbo(config, r);
      } catch (const std::exception& e) {
        slot.records.clear();
        slot.error = e.what();
      }
    }
  };
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(config.replicates));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  result.summary = summarize(result.replicates);
  return result;
}

}  // namespace pbo
