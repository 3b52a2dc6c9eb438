#ifndef PBO_HTTP_SERVICE_HPP
#define PBO_HTTP_SERVICE_HPP

#include "pbo/session.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace pbo {

/// JSON-over-HTTP front end for a SessionManager.
///
///   POST /sessions                  {domain, policy, config} -> {id}
///   GET  /sessions/{id}/next-duel   -> {left, right}
///   POST /sessions/{id}/outcome     {y} -> {size}
///   POST /sessions/{id}/simulate    -> {size, y}      (simulated sessions)
///   GET  /sessions/{id}/winner      -> {point, score, table}
///   GET  /sessions/{id}             -> public state
///
/// Errors are returned as {code, message} with a matching HTTP status.
class HttpService {
 public:
  explicit HttpService(SessionManager& sessions,
                       std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Blocks until stop() is called. Returns false if the socket cannot be bound.
  bool listen(const std::string& addr, int port);
  /// Binds to an ephemeral port and returns it (-1 on failure); call listen_after_bind() next.
  int bind_any_port(const std::string& addr);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
};

int http_status(Errc code);

}  // namespace pbo

#endif  // PBO_HTTP_SERVICE_HPP
