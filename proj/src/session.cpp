#include "pbo/session.hpp"

#include "pbo/baselines.hpp"
#include "pbo/preference_model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pbo {

using nlohmann::json;

namespace {

constexpr Index kMaxSessionGrid = 20000;
constexpr int kSessionDuelSample = 500;

json vector_to_json(const Eigen::Ref<const Vector>& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(Errc::invalid_argument, "expected a numeric array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(Errc::invalid_argument, "expected a numeric array");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

// Wraps nlohmann type errors into invalid_argument.
template <typename F>
auto checked(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed request: ") + e.what());
  }
}

}  // namespace

json domain_to_json(const Domain& domain) {
  json bounds = json::array();
  for (const auto& [lo, hi] : domain.bounds) bounds.push_back({lo, hi});
  json j{{"bounds", bounds}};
  if (domain.grid_per_dim) j["grid_per_dim"] = *domain.grid_per_dim;
  return j;
}

Domain domain_from_json(const json& j) {
  return checked([&] {
    Domain d;
    for (const auto& b : j.at("bounds")) {
      if (!b.is_array() || b.size() != 2) throw Error(Errc::invalid_argument, "domain bounds must be [lo, hi] pairs");
      d.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
    if (j.contains("grid_per_dim")) d.grid_per_dim = j.at("grid_per_dim").get<int>();
    d.validate();
    return d;
  });
}

json params_to_json(const KernelParams& params) {
  return {{"signal_variance", params.signal_variance},
          {"lengthscales", vector_to_json(params.lengthscales)},
          {"jitter", params.jitter}};
}

KernelParams params_from_json(const json& j) {
  return checked([&] {
    KernelParams p;
    p.signal_variance = j.at("signal_variance").get<double>();
    p.lengthscales = vector_from_json(j.at("lengthscales"));
    p.jitter = j.at("jitter").get<double>();
    p.validate(p.input_dim());
    return p;
  });
}

SessionSpec spec_from_json(const json& j) {
  return checked([&] {
    if (!j.is_object()) throw Error(Errc::invalid_argument, "session spec must be an object");
    SessionSpec spec;
    spec.domain = domain_from_json(j.at("domain"));
    if (!spec.domain.grid_per_dim) spec.domain.grid_per_dim = 33;
    if (j.contains("policy")) spec.policy = parse_policy(j.at("policy").get<std::string>());
    if (j.contains("config")) {
      const json& c = j.at("config");
      if (c.contains("features")) spec.config.features = c.at("features").get<int>();
      if (c.contains("seed")) spec.config.seed = c.at("seed").get<std::uint64_t>();
      if (c.contains("n_init")) spec.config.n_init = c.at("n_init").get<int>();
      if (c.contains("simulated") && !c.at("simulated").is_null()) {
        spec.config.simulated = parse_benchmark(c.at("simulated").get<std::string>());
      }
    }
    return spec;
  });
}

json spec_to_json(const SessionSpec& spec) {
  json config{{"features", spec.config.features}, {"seed", spec.config.seed}, {"n_init", spec.config.n_init}};
  config["simulated"] = spec.config.simulated ? json(std::string(to_string(*spec.config.simulated))) : json(nullptr);
  return {{"domain", domain_to_json(spec.domain)}, {"policy", std::string(to_string(spec.policy))}, {"config", config}};
}

json winner_to_json(const WinnerReport& report) {
  json table = json::array();
  for (Index i = 0; i < report.table_points.rows(); ++i) {
    table.push_back({{"point", vector_to_json(report.table_points.row(i).transpose())},
                     {"score", report.table_scores(i)}});
  }
  return {{"point", vector_to_json(report.point)}, {"score", report.score}, {"index", report.index}, {"table", table}};
}

namespace {

void validate_spec(const SessionSpec& spec) {
  spec.domain.validate();
  if (!spec.domain.grid_per_dim) throw Error(Errc::invalid_argument, "session domain needs grid_per_dim");
  if (grid_size(spec.domain) > kMaxSessionGrid) {
    throw Error(Errc::invalid_argument, "session grid has more than " + std::to_string(kMaxSessionGrid) + " points");
  }
  if (spec.policy == Policy::cei && spec.domain.dim() > 1) {
    throw Error(Errc::invalid_argument, "policy cei is only supported on 1-D domains (cost grows with the square of the grid)");
  }
  if (spec.config.features < 1) throw Error(Errc::invalid_argument, "features must be at least 1");
  if (spec.config.n_init < 1) throw Error(Errc::invalid_argument, "n_init must be at least 1");
  if (spec.config.simulated) {
    const Domain box = canonical_domain(*spec.config.simulated);
    if (box.dim() != spec.domain.dim()) {
      throw Error(Errc::invalid_argument, "simulated benchmark dimension does not match the domain");
    }
    for (std::size_t d = 0; d < box.bounds.size(); ++d) {
      if (spec.domain.bounds[d].first < box.bounds[d].first || spec.domain.bounds[d].second > box.bounds[d].second) {
        throw Error(Errc::invalid_argument, "domain extends outside the simulated benchmark's box");
      }
    }
  }
}

json duel_event_fields(const PendingDuel& p) {
  return {{"left_index", p.indices.left},
          {"right_index", p.indices.right},
          {"left", vector_to_json(p.duel.left)},
          {"right", vector_to_json(p.duel.right)}};
}

// Model of the session's data with its stored hyperparameters as the starting point.
PreferenceModel session_model(const SessionState& s, std::uint64_t hyper_seed) {
  ModelSettings settings;
  settings.hyper.seed = hyper_seed;
  PreferenceModel model(s.spec.domain, settings);
  if (s.params) model.set_params(*s.params);
  return model;
}

PendingDuel propose(const SessionState& s, std::optional<KernelParams>& fitted) {
  const std::uint64_t seed = s.spec.config.seed;
  const auto k = static_cast<std::uint64_t>(s.proposals);
  Rng rng = make_stream(seed, "proposal", k);
  const Index n = s.grid.rows();
  IndexDuel idx;

  const bool bootstrap = s.dataset.size() < s.spec.config.n_init;
  if (bootstrap || s.spec.policy == Policy::random) {
    const auto [a, b] = random_duel_indices(n, rng);
    idx = {a, b};
  } else if (s.spec.policy == Policy::sparring) {
    SparringState sparring(n);
    for (std::size_t i = static_cast<std::size_t>(s.spec.config.n_init); i < s.history.size(); ++i) {
      sparring_update(sparring, s.history[i].left, s.history[i].right, s.dataset.labels(static_cast<Index>(i)));
    }
    const auto [a, b] = sparring_select(sparring);
    idx = {a, b};
  } else {
    PreferenceModel model = session_model(s, derive_seed(seed, "hyper", k));
    model.fit(s.dataset);
    fitted = model.params();
    const Points unit = s.spec.domain.to_unit(s.grid);
    const LandmarkSet landmarks = grid_landmarks(unit);
    switch (s.spec.policy) {
      case Policy::dts:
        idx = acq_dts(model.posterior(), s.spec.config.features, unit, landmarks.points, rng).indices;
        break;
      case Policy::pe: {
        const auto duels = s.spec.domain.dim() == 1 ? all_ordered_pairs(n) : sample_ordered_pairs(n, kSessionDuelSample, rng);
        idx = acq_pure_exploration(model.posterior(), unit, duels).indices;
        break;
      }
      case Policy::cei: {
        const auto duels = all_ordered_pairs(n);
        idx = acq_cei(model.posterior(), unit, duels, landmarks).choice.indices;
        break;
      }
      default:
        throw Error(Errc::invalid_argument, "unsupported policy");
    }
  }
  return {idx, Duel{s.grid.row(idx.left).transpose(), s.grid.row(idx.right).transpose()}};
}

}  // namespace

namespace {

// Parsed events of a log. A torn final line, which is what an interrupted
// append leaves behind, is dropped and reported through `torn`.
std::vector<json> load_events(const std::filesystem::path& log_path, bool& torn) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open event log '" + log_path.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  torn = false;
  std::vector<json> events;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      events.push_back(json::parse(lines[i]));
    } catch (const json::exception&) {
      if (i + 1 == lines.size()) {
        torn = true;
        break;
      }
      throw Error(Errc::io, "event log '" + log_path.string() + "': malformed line " + std::to_string(i + 1));
    }
  }
  return events;
}

}  // namespace

SessionManager::SessionManager(std::optional<std::filesystem::path> events_dir) : events_dir_(std::move(events_dir)) {
  if (!events_dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*events_dir_, ec);
  if (ec) throw Error(Errc::io, "cannot create events directory '" + events_dir_->string() + "': " + ec.message());
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(*events_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    bool torn = false;
    const std::vector<json> events = load_events(path, torn);
    auto e = std::make_shared<Entry>();
    e->state = replay(events);
    if (torn) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      for (const json& ev : events) out << ev.dump() << '\n';
      if (!out) throw Error(Errc::io, "cannot repair event log '" + path.string() + "'");
    }
    sessions_[e->state.id] = std::move(e);
  }
  id_counter_ = sessions_.size();
}

std::string SessionManager::fresh_id() {
  while (true) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(++id_counter_));
    const std::string id(buf);
    const bool taken = sessions_.count(id) > 0 ||
                       (events_dir_ && std::filesystem::exists(*events_dir_ / (id + ".jsonl")));
    if (!taken) return id;
  }
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(Errc::not_found, "unknown session '" + id + "'");
  return it->second;
}

void SessionManager::append_event(SessionState& state, json event) {
  event["seq"] = state.seq + 1;
  if (events_dir_) {
    const auto path = *events_dir_ / (state.id + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error(Errc::io, "cannot open event log '" + path.string() + "'");
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw Error(Errc::io, "failed writing event log '" + path.string() + "'");
  }
  apply_event(state, event);
}

void SessionManager::apply_event(SessionState& state, const json& event) {
  checked([&] {
    const std::int64_t seq = event.at("seq").get<std::int64_t>();
    if (seq != state.seq + 1) throw Error(Errc::io, "event log: sequence numbers are not contiguous");
    const std::string type = event.at("type").get<std::string>();
    if (type == "created") {
      if (state.seq != -1) throw Error(Errc::io, "event log: duplicate creation event");
      state.id = event.at("id").get<std::string>();
      state.spec = spec_from_json(event.at("spec"));
      state.grid = make_grid(state.spec.domain);
      state.dataset = DuelDataset(state.spec.domain.dim());
    } else if (type == "proposed") {
      if (state.pending) throw Error(Errc::io, "event log: proposal while a duel is pending");
      PendingDuel p;
      p.indices = {event.at("left_index").get<Index>(), event.at("right_index").get<Index>()};
      if (p.indices.left < 0 || p.indices.right < 0 || p.indices.left >= state.grid.rows() ||
          p.indices.right >= state.grid.rows()) {
        throw Error(Errc::io, "event log: duel index out of range");
      }
      p.duel = Duel{state.grid.row(p.indices.left).transpose(), state.grid.row(p.indices.right).transpose()};
      state.pending = std::move(p);
      if (event.contains("params")) state.params = params_from_json(event.at("params"));
      ++state.proposals;
    } else if (type == "outcome") {
      if (!state.pending) throw Error(Errc::io, "event log: outcome without a pending duel");
      const int y = event.at("y").get<int>();
      state.dataset.add(state.pending->duel, y);
      state.history.push_back(state.pending->indices);
      state.pending.reset();
    } else {
      throw Error(Errc::io, "event log: unknown event type '" + type + "'");
    }
    state.seq = seq;
    return 0;
  });
}

std::string SessionManager::create_session(const SessionSpec& input) {
  SessionSpec spec = input;
  if (!spec.domain.grid_per_dim) spec.domain.grid_per_dim = 33;
  validate_spec(spec);
  auto entry = std::make_shared<Entry>();
  std::lock_guard lock(sessions_mutex_);
  const std::string id = fresh_id();
  entry->state.id = id;
  append_event(entry->state, {{"type", "created"}, {"id", id}, {"spec", spec_to_json(spec)}});
  sessions_[id] = entry;
  return id;
}

Duel SessionManager::next_duel(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  SessionState& s = entry->state;
  if (s.pending) return s.pending->duel;
  std::optional<KernelParams> fitted;
  const PendingDuel p = propose(s, fitted);
  json event = duel_event_fields(p);
  event["type"] = "proposed";
  if (fitted) event["params"] = params_to_json(*fitted);
  append_event(s, std::move(event));
  return s.pending->duel;
}

Index SessionManager::record_outcome(const std::string& id, int y) {
  if (y != 0 && y != 1) throw Error(Errc::invalid_argument, "outcome y must be 0 or 1");
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  SessionState& s = entry->state;
  if (!s.pending) throw Error(Errc::conflict, "no pending duel; request /next-duel first");
  append_event(s, {{"type", "outcome"}, {"y", y}});
  return s.dataset.size();
}

Index SessionManager::simulate_outcome(const std::string& id) {
  auto entry = find(id);
  SessionSpec spec;
  {
    std::lock_guard lock(entry->mutex);
    spec = entry->state.spec;
  }
  if (!spec.config.simulated) throw Error(Errc::conflict, "session has no simulated objective");
  next_duel(id);
  std::lock_guard lock(entry->mutex);
  SessionState& s = entry->state;
  if (!s.pending) throw Error(Errc::conflict, "no pending duel");
  Rng rng = make_stream(spec.config.seed, "simulate", static_cast<std::uint64_t>(s.dataset.size()));
  const int y = sample_duel_outcome(*spec.config.simulated, s.pending->duel, rng).y;
  append_event(s, {{"type", "outcome"}, {"y", y}});
  return s.dataset.size();
}

WinnerReport SessionManager::current_winner(const std::string& id) {
  auto entry = find(id);
  SessionState s;
  {
    std::lock_guard lock(entry->mutex);
    s = entry->state;
  }
  if (s.dataset.empty()) throw Error(Errc::conflict, "no outcomes recorded yet");
  PreferenceModel model = session_model(s, derive_seed(s.spec.config.seed, "winner"));
  if (s.params) {
    model.fit_with(s.dataset, *s.params);
  } else {
    model.fit(s.dataset, true);
  }
  const Points unit = s.spec.domain.to_unit(s.grid);
  const CopelandEstimate est = condorcet_winner(model.posterior(), unit, grid_landmarks(unit));
  WinnerReport report;
  report.index = est.winner_index;
  report.point = s.grid.row(est.winner_index).transpose();
  report.score = est.winner_score;
  report.table_points = s.grid;
  report.table_scores = est.scores;
  return report;
}

SessionState SessionManager::state(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return entry->state;
}

json SessionManager::public_state(const std::string& id) const {
  const SessionState s = state(id);
  json duels = json::array();
  for (Index i = 0; i < s.dataset.size(); ++i) {
    const Duel d = s.dataset.duel(i);
    duels.push_back({{"left", vector_to_json(d.left)}, {"right", vector_to_json(d.right)}, {"y", s.dataset.labels(i)}});
  }
  json j = spec_to_json(s.spec);
  j["id"] = s.id;
  j["size"] = s.dataset.size();
  j["duels"] = duels;
  j["pending"] = s.pending ? json{{"left", vector_to_json(s.pending->duel.left)},
                                  {"right", vector_to_json(s.pending->duel.right)}}
                           : json(nullptr);
  j["params"] = s.params ? params_to_json(*s.params) : json(nullptr);
  j["proposals"] = s.proposals;
  j["seq"] = s.seq;
  return j;
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

SessionState SessionManager::replay(const std::vector<json>& events) {
  SessionState state;
  for (const json& e : events) apply_event(state, e);
  if (state.seq < 0) throw Error(Errc::io, "event log is empty");
  return state;
}

SessionState SessionManager::replay(const std::filesystem::path& log_path) {
  bool torn = false;
  return replay(load_events(log_path, torn));
}

}  // namespace pbo
