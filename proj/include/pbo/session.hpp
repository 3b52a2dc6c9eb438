#ifndef PBO_SESSION_HPP
#define PBO_SESSION_HPP

#include "pbo/acquisition.hpp"
#include "pbo/benchmarks.hpp"
#include "pbo/copeland.hpp"
#include "pbo/kernel.hpp"
#include "pbo/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace pbo {

struct SessionConfig {
  int features = 500;
  std::uint64_t seed = 0;
  int n_init = 5;
  /// Demo/test mode: outcomes can be drawn from this benchmark instead of a human.
  std::optional<BenchmarkId> simulated;
};

struct SessionSpec {
  Domain domain;  // grid_per_dim defaults to 33 when absent
  Policy policy = Policy::dts;
  SessionConfig config;
};

struct PendingDuel {
  IndexDuel indices;
  Duel duel;
};

struct WinnerReport {
  Vector point;
  double score = 0.0;
  Index index = 0;
  Points table_points;
  Vector table_scores;
};

/// Live state of one session. Every field is reproducible by replaying the
/// session's event log.
struct SessionState {
  std::string id;
  SessionSpec spec;
  Points grid;
  DuelDataset dataset;  // domain coordinates
  std::vector<IndexDuel> history;
  std::optional<PendingDuel> pending;
  std::optional<KernelParams> params;  // hyperparameters of the latest fit
  Index proposals = 0;
  std::int64_t seq = -1;  // sequence number of the last applied event
};

/// Interactive sessions backed by append-only JSON-lines event logs
/// (`<events_dir>/<id>.jsonl`). Mutations of one session are serialized;
/// different sessions proceed independently.
class SessionManager {
 public:
  /// Without a directory, sessions live in memory only. Existing logs in the
  /// directory are replayed on construction.
  explicit SessionManager(std::optional<std::filesystem::path> events_dir = std::nullopt);

  std::string create_session(const SessionSpec& spec);
  /// Pending duel if there is one, otherwise a new proposal.
  Duel next_duel(const std::string& id);
  /// Returns the new dataset size.
  Index record_outcome(const std::string& id, int y);
  /// Records an outcome drawn from the session's simulated benchmark.
  Index simulate_outcome(const std::string& id);
  WinnerReport current_winner(const std::string& id);

  SessionState state(const std::string& id) const;
  nlohmann::json public_state(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// Rebuilds a session state from its event log, without touching the manager.
  static SessionState replay(const std::filesystem::path& log_path);
  static SessionState replay(const std::vector<nlohmann::json>& events);

 private:
  struct Entry {
    mutable std::mutex mutex;
    SessionState state;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  void append_event(SessionState& state, nlohmann::json event);
  static void apply_event(SessionState& state, const nlohmann::json& event);
  std::string fresh_id();

  std::optional<std::filesystem::path> events_dir_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t id_counter_ = 0;
};

nlohmann::json domain_to_json(const Domain& domain);
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const KernelParams& params);
KernelParams params_from_json(const nlohmann::json& j);
SessionSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SessionSpec& spec);
nlohmann::json winner_to_json(const WinnerReport& report);

}  // namespace pbo

#endif  // PBO_SESSION_HPP
