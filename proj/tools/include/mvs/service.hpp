#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "mvs/database.hpp"

namespace mvs {

struct HttpResponse {
  int status = 200;
  std::string body;
};

/// Request handlers over a read-only index, independent of the transport.
///
/// POST /query  {"views": [[f, ...], ...], "strategy": "lf-avg", "topk": 20,
///               "renormalize_ef": false, "literal_minwavg": false}
///   -> {"results": [{"object_id", "category", "distance"}], "strategy",
///       "took_ms"}
/// GET /health  -> {"ready", "objects", "views", "dim"}
///
/// Failures respond with {"error": {"code": "<snake_case>", "message"}}.
class QueryService {
 public:
  QueryService() = default;
  explicit QueryService(std::shared_ptr<const Database> db);

  /// Marks the service ready. May be called once loading finishes while
  /// requests are already being served.
  void set_database(std::shared_ptr<const Database> db);
  bool ready() const;

  HttpResponse handle_query(std::string_view body) const;
  HttpResponse handle_health() const;

 private:
  std::shared_ptr<const Database> database() const;

  mutable std::mutex mu_;
  std::shared_ptr<const Database> db_;
};

HttpResponse error_response(int status, std::string_view code,
                            std::string_view message);

/// HTTP transport for QueryService: POST /query, GET /health, JSON 404 for
/// anything else. listen() blocks until stop() is called from another
/// thread; in-flight requests complete first.
class HttpServer {
 public:
  explicit HttpServer(const QueryService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port; throws kIoError when binding fails.
  int bind(const std::string& host, int port);
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mvs
