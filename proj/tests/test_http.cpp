#include "pbo/http_service.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <thread>

using namespace pbo;
using nlohmann::json;

namespace {

// Runs a service on an ephemeral loopback port for the lifetime of the fixture.
struct LiveServer {
  SessionManager sessions;
  HttpService service{sessions};
  int port = -1;
  std::thread worker;

  explicit LiveServer(std::optional<std::filesystem::path> dir = std::nullopt) : sessions(std::move(dir)) {
    port = service.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    worker = std::thread([this] { service.listen_after_bind(); });
    service.wait_until_ready();
  }
  ~LiveServer() {
    service.stop();
    worker.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }
};

const char* kForrester = R"({"domain":{"bounds":[[0,1]],"grid_per_dim":17},
  "policy":"dts","config":{"features":100,"seed":3,"n_init":2,"simulated":"forrester"}})";

std::string create(httplib::Client& c, const std::string& body = kForrester) {
  auto res = c.Post("/sessions", body, "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  return json::parse(res->body).at("id").get<std::string>();
}

json body_of(const httplib::Result& res) {
  REQUIRE(res);
  return json::parse(res->body);
}

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status(Errc::invalid_argument) == 400);
  CHECK(http_status(Errc::out_of_domain) == 400);
  CHECK(http_status(Errc::not_found) == 404);
  CHECK(http_status(Errc::conflict) == 409);
  CHECK(http_status(Errc::convergence) == 422);
  CHECK(http_status(Errc::io) == 500);
}

TEST_CASE("a full duel loop over HTTP") {
  LiveServer server;
  auto c = server.client();
  const std::string id = create(c);

  auto listed = c.Get("/sessions");
  CHECK(body_of(listed).at("ids") == json::array({id}));

  for (int k = 0; k < 6; ++k) {
    auto duel = c.Get("/sessions/" + id + "/next-duel");
    REQUIRE(duel->status == 200);
    const json d = body_of(duel);
    CHECK(d.at("left").size() == 1);
    CHECK(d.at("right").size() == 1);

    // Asking again without answering returns the same duel.
    CHECK(body_of(c.Get("/sessions/" + id + "/next-duel")) == d);

    auto out = c.Post("/sessions/" + id + "/outcome", json{{"y", k % 2}}.dump(), "application/json");
    REQUIRE(out->status == 200);
    CHECK(body_of(out).at("size") == k + 1);
  }

  auto sim = c.Post("/sessions/" + id + "/simulate", "", "application/json");
  REQUIRE(sim->status == 200);
  const json s = body_of(sim);
  CHECK(s.at("size") == 7);
  CHECK((s.at("y") == 0 || s.at("y") == 1));

  auto winner = c.Get("/sessions/" + id + "/winner");
  REQUIRE(winner->status == 200);
  const json w = body_of(winner);
  CHECK(w.at("table").size() == 17);
  CHECK(w.at("point").size() == 1);
  CHECK(w.at("score").get<double>() >= 0.0);
  CHECK(w.at("score").get<double>() <= 1.0);

  auto state = c.Get("/sessions/" + id);
  REQUIRE(state->status == 200);
  const json st = body_of(state);
  CHECK(st.at("size") == 7);
  CHECK(st.at("duels").size() == 7);
  CHECK(st.at("duels")[0].at("y") == 0);
  CHECK(st.at("duels")[1].at("y") == 1);
}

TEST_CASE("errors come back as code and message with a matching status") {
  LiveServer server;
  auto c = server.client();

  auto missing = c.Get("/sessions/nope/next-duel");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(body_of(missing).at("code") == "not_found");
  CHECK(body_of(missing).at("message").is_string());

  auto garbage = c.Post("/sessions", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(body_of(garbage).at("code") == "invalid_argument");

  auto bad_policy = c.Post("/sessions", R"({"domain":{"bounds":[[0,1]]},"policy":"nope"})", "application/json");
  CHECK(bad_policy->status == 400);

  auto cei_2d = c.Post("/sessions", R"({"domain":{"bounds":[[0,1],[0,1]],"grid_per_dim":5},"policy":"cei"})",
                       "application/json");
  CHECK(cei_2d->status == 400);

  const std::string id = create(c);
  auto early = c.Post("/sessions/" + id + "/outcome", R"({"y":1})", "application/json");
  CHECK(early->status == 409);
  CHECK(body_of(early).at("code") == "conflict");

  auto no_winner = c.Get("/sessions/" + id + "/winner");
  CHECK(no_winner->status == 409);

  REQUIRE(c.Get("/sessions/" + id + "/next-duel")->status == 200);
  CHECK(c.Post("/sessions/" + id + "/outcome", R"({"y":2})", "application/json")->status == 400);
  CHECK(c.Post("/sessions/" + id + "/outcome", R"({"y":"1"})", "application/json")->status == 400);
  CHECK(c.Post("/sessions/" + id + "/outcome", R"({})", "application/json")->status == 400);
  // The rejected answers did not consume the pending duel.
  CHECK(c.Post("/sessions/" + id + "/outcome", R"({"y":1})", "application/json")->status == 200);

  const std::string human = create(c, R"({"domain":{"bounds":[[0,1]],"grid_per_dim":9}})");
  CHECK(c.Post("/sessions/" + human + "/simulate", "", "application/json")->status == 409);
}

TEST_CASE("preflight requests are answered for browser clients") {
  LiveServer server;
  auto c = server.client();
  auto res = c.Options("/sessions");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(res->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("sessions survive a service restart") {
  const auto dir = std::filesystem::temp_directory_path() / "pbo_http_restart";
  std::filesystem::remove_all(dir);
  std::string id;
  json before;
  {
    LiveServer server(dir);
    auto c = server.client();
    id = create(c);
    for (int k = 0; k < 3; ++k) REQUIRE(c.Post("/sessions/" + id + "/simulate", "", "application/json")->status == 200);
    REQUIRE(c.Get("/sessions/" + id + "/next-duel")->status == 200);
    before = body_of(c.Get("/sessions/" + id));
  }
  {
    LiveServer server(dir);
    auto c = server.client();
    const json after = body_of(c.Get("/sessions/" + id));
    CHECK(after == before);
    CHECK(after.at("pending").is_object());
  }
  std::filesystem::remove_all(dir);
}
