#include "pbo/http_service.hpp"

#include <httplib.h>

namespace pbo {

using nlohmann::json;

int http_status(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::out_of_domain: return 400;
    case Errc::not_found: return 404;
    case Errc::conflict: return 409;
    case Errc::convergence: return 422;
    case Errc::factorization:
    case Errc::io: return 500;
  }
  return 500;
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  send_json(res, http_status(code), {{"code", std::string(to_string(code))}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("request body is not valid JSON: ") + e.what());
  }
}

json point_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, Errc::io, e.what());
    }
  };
}

}  // namespace

HttpService::HttpService(SessionManager& sessions, std::optional<std::filesystem::path> ui_dir)
    : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  srv.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = sessions_.create_session(spec_from_json(parse_body(req)));
             send_json(res, 201, {{"id", id}});
           }));
  srv.Get(R"(/sessions/([^/]+)/next-duel)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const Duel d = sessions_.next_duel(req.matches[1]);
            send_json(res, 200, {{"left", point_json(d.left)}, {"right", point_json(d.right)}});
          }));
  srv.Post(R"(/sessions/([^/]+)/outcome)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const json body = parse_body(req);
             if (!body.contains("y") || !body.at("y").is_number_integer()) {
               throw Error(Errc::invalid_argument, "body must be {\"y\": 0 or 1}");
             }
             const Index size = sessions_.record_outcome(req.matches[1], body.at("y").get<int>());
             send_json(res, 200, {{"size", size}});
           }));
  srv.Post(R"(/sessions/([^/]+)/simulate)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             const Index size = sessions_.simulate_outcome(id);
             const SessionState s = sessions_.state(id);
             send_json(res, 200, {{"size", size}, {"y", s.dataset.labels(size - 1)}});
           }));
  srv.Get(R"(/sessions/([^/]+)/winner)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, winner_to_json(sessions_.current_winner(req.matches[1])));
          }));
  srv.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, sessions_.public_state(req.matches[1]));
          }));
  srv.Get("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"ids", sessions_.ids()}});
          }));

  if (ui_dir) {
    if (!srv.set_mount_point("/ui", ui_dir->string())) {
      throw Error(Errc::io, "UI directory '" + ui_dir->string() + "' does not exist");
    }
  }
}

HttpService::~HttpService() = default;

bool HttpService::listen(const std::string& addr, int port) { return server_->listen(addr, port); }

int HttpService::bind_any_port(const std::string& addr) { return server_->bind_to_any_port(addr); }

bool HttpService::listen_after_bind() { return server_->listen_after_bind(); }

void HttpService::stop() { server_->stop(); }

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace pbo
