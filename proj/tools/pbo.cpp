// Command-line front end: experiment runs, the exact-oracle audit and the session server.
#include "pbo/benchmarks.hpp"
#include "pbo/copeland.hpp"
#include "pbo/experiment.hpp"
#include "pbo/http_service.hpp"
#include "pbo/results_io.hpp"
#include "pbo/session.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

void print_error(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

struct RunArgs {
  std::string function = "forrester";
  std::string policy = "dts";
  int budget = 200;
  int init = 5;
  int grid = 33;
  int replicates = 20;
  std::uint64_t seed = 0;
  int features = 500;
  std::string landmarks = "grid";
  int landmark_count = 100;
  int duel_sample = 500;
  int winner_every = 1;
  int threads = 0;
  bool timing = false;
  std::string out;
  std::string format = "csv";
  std::string summary;
};

int cmd_run(const RunArgs& a) {
  pbo::ExperimentConfig c;
  c.fn = pbo::parse_benchmark(a.function);
  c.policy = pbo::parse_policy(a.policy);
  c.budget = a.budget;
  c.n_init = a.init;
  c.grid_per_dim = a.grid;
  c.replicates = a.replicates;
  c.seed = a.seed;
  c.features = a.features;
  if (a.landmarks == "grid") {
    c.landmarks = pbo::LandmarkMode::grid;
  } else if (a.landmarks == "uniform") {
    c.landmarks = pbo::LandmarkMode::uniform;
  } else {
    throw pbo::Error(pbo::Errc::invalid_argument, "landmarks must be grid or uniform");
  }
  c.landmark_count = a.landmark_count;
  c.cei_pairs = a.duel_sample;
  c.winner_every = a.winner_every;
  c.threads = a.threads;
  c.timing = a.timing;
  if (c.policy == pbo::Policy::cei && pbo::canonical_domain(c.fn).dim() > 1) {
    std::cerr << json{{"warning", "cei on a 2-D grid scores a sampled subset of duels"}}.dump() << '\n';
  }
  const pbo::ResultFormat format = pbo::parse_format(a.format);

  const pbo::ExperimentResult result = pbo::run_experiment(c);
  int failed = 0;
  for (const auto& r : result.replicates) {
    if (r.error) {
      ++failed;
      print_error("replicate_failed", "replicate " + std::to_string(r.replicate) + ": " + *r.error);
    }
  }
  const auto records = result.records();
  if (a.out.empty() || a.out == "-") {
    const auto rows = pbo::to_rows(records, c.policy, c.fn);
    const auto dim = pbo::canonical_domain(c.fn).dim();
    if (format == pbo::ResultFormat::csv) {
      pbo::write_csv(std::cout, rows, dim);
    } else {
      pbo::write_json(std::cout, rows, dim);
    }
  } else {
    pbo::write_results(records, c.policy, c.fn, a.out, format);
  }
  if (!a.summary.empty()) {
    std::ofstream out(a.summary, std::ios::binary | std::ios::trunc);
    if (!out) throw pbo::Error(pbo::Errc::io, "cannot open '" + a.summary + "' for writing");
    pbo::write_summary_csv(out, result.summary);
  }
  if (failed == c.replicates) return 1;
  return 0;
}

int cmd_oracle_check(const std::string& function, int grid) {
  std::vector<pbo::BenchmarkId> ids;
  if (function.empty() || function == "all") {
    ids.assign(pbo::kAllBenchmarks.begin(), pbo::kAllBenchmarks.end());
  } else {
    ids.push_back(pbo::parse_benchmark(function));
  }
  bool all_ok = true;
  for (const pbo::BenchmarkId id : ids) {
    const pbo::Domain domain = pbo::canonical_domain(id, grid);
    const pbo::Points pts = pbo::make_grid(domain);
    pbo::Vector g(pts.rows());
    for (pbo::Index i = 0; i < pts.rows(); ++i) g(i) = pbo::eval_objective(id, pts.row(i).transpose());
    pbo::Index argmin = 0;
    for (pbo::Index i = 1; i < g.size(); ++i) {
      if (g(i) < g(argmin)) argmin = i;
    }
    const auto est = pbo::copeland_from_preferences(pts, pbo::oracle_preference_matrix(id, pts, pts));
    // Grids can hold several exact minimizers; any of them is a correct winner.
    const bool ok = g(est.winner_index) == g(argmin);
    all_ok = all_ok && ok;
    json line{{"function", std::string(pbo::to_string(id))},
              {"grid_points", pts.rows()},
              {"argmin_index", argmin},
              {"winner_index", est.winner_index},
              {"g_min", g(argmin)},
              {"g_winner", g(est.winner_index)},
              {"ok", ok}};
    std::cout << line.dump() << '\n';
  }
  return all_ok ? 0 : 1;
}

pbo::HttpService* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const std::string& addr, int port, const std::string& events_dir, const std::string& ui_dir) {
  pbo::SessionManager sessions(events_dir.empty() ? std::nullopt
                                                  : std::optional<std::filesystem::path>(events_dir));
  pbo::HttpService service(sessions, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
  g_service = &service;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  int bound = port;
  if (port == 0) {
    bound = service.bind_any_port(addr);
    if (bound < 0) throw pbo::Error(pbo::Errc::io, "cannot bind " + addr);
  }
  std::cerr << json{{"listening", {{"addr", addr}, {"port", bound}}}}.dump() << '\n';
  const bool ok = port == 0 ? service.listen_after_bind() : service.listen(addr, port);
  g_service = nullptr;
  if (!ok) throw pbo::Error(pbo::Errc::io, "cannot listen on " + addr + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preferential Bayesian optimization"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a multi-replicate benchmark experiment");
  run_cmd->add_option("--function", run.function, "forrester | six-hump-camel | goldstein-price | levy")
      ->capture_default_str();
  run_cmd->add_option("--policy", run.policy, "pe | cei | dts | random | sparring")->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "Duels after initialization")->capture_default_str();
  run_cmd->add_option("--init", run.init, "Initial random duels")->capture_default_str();
  run_cmd->add_option("--grid", run.grid, "Grid points per dimension")->capture_default_str();
  run_cmd->add_option("--replicates", run.replicates)->capture_default_str();
  run_cmd->add_option("--seed", run.seed)->capture_default_str();
  run_cmd->add_option("--features", run.features, "Random Fourier features for Thompson sampling")
      ->capture_default_str();
  run_cmd->add_option("--landmarks", run.landmarks, "grid | uniform")->capture_default_str();
  run_cmd->add_option("--landmark-count", run.landmark_count, "Uniform landmarks")->capture_default_str();
  run_cmd->add_option("--duel-sample", run.duel_sample, "Duels scored by pe/cei above 1-D")->capture_default_str();
  run_cmd->add_option("--winner-every", run.winner_every, "Record the winner every k iterations")
      ->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)")->capture_default_str();
  run_cmd->add_flag("--timing", run.timing, "Fill the wall_ms column");
  run_cmd->add_option("--out", run.out, "Output path (stdout when omitted)");
  run_cmd->add_option("--format", run.format, "csv | json")->capture_default_str();
  run_cmd->add_option("--summary", run.summary, "Per-iteration median/mean CSV");

  std::string check_fn = "all";
  int check_grid = 33;
  auto* check_cmd = app.add_subcommand("oracle-check", "Exact-oracle Condorcet winner versus grid argmin");
  check_cmd->add_option("--function", check_fn, "Benchmark id or 'all'")->capture_default_str();
  check_cmd->add_option("--grid", check_grid)->capture_default_str();

  std::string addr = "127.0.0.1";
  int port = 8080;
  std::string events_dir = "events";
  std::string ui_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve interactive sessions over HTTP");
  serve_cmd->add_option("--addr", addr)->capture_default_str();
  serve_cmd->add_option("--port", port, "0 picks a free port")->capture_default_str();
  serve_cmd->add_option("--events-dir", events_dir, "Event log directory ('' keeps sessions in memory)")
      ->capture_default_str();
  serve_cmd->add_option("--ui-dir", ui_dir, "Static UI assets served under /ui/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("invalid_argument", e.what());
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*check_cmd) return cmd_oracle_check(check_fn, check_grid);
    if (*serve_cmd) return cmd_serve(addr, port, events_dir, ui_dir);
  } catch (const pbo::Error& e) {
    print_error(pbo::to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
