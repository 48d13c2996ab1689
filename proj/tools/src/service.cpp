#include "mvs/service.hpp"

#include <chrono>

#include "httplib.h"
#include "json.hpp"
#include "mvs/error.hpp"
#include "mvs/rank.hpp"

namespace mvs {
namespace {

using json = nlohmann::json;

constexpr std::size_t kDefaultTopK = 20;

HttpResponse json_response(int status, const json& body) {
  return {status, body.dump()};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kUnknownStrategy:
    case ErrorCode::kInvalidQuery:
    case ErrorCode::kEmptyViewSet:
    case ErrorCode::kZeroVector:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kInvalidConfig:
      return 400;
    default:
      return 500;
  }
}

}  // namespace

HttpResponse error_response(int status, std::string_view code,
                            std::string_view message) {
  return json_response(
      status, {{"error", {{"code", code}, {"message", message}}}});
}

QueryService::QueryService(std::shared_ptr<const Database> db)
    : db_(std::move(db)) {}

void QueryService::set_database(std::shared_ptr<const Database> db) {
  std::lock_guard lock(mu_);
  db_ = std::move(db);
}

std::shared_ptr<const Database> QueryService::database() const {
  std::lock_guard lock(mu_);
  return db_;
}

bool QueryService::ready() const { return database() != nullptr; }

HttpResponse QueryService::handle_health() const {
  const auto db = database();
  if (!db) {
    return json_response(503, {{"ready", false}});
  }
  return json_response(200, {{"ready", true},
                             {"objects", db->size()},
                             {"views", db->view_count()},
                             {"dim", db->dim()}});
}

HttpResponse QueryService::handle_query(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  const auto db = database();
  if (!db) {
    return error_response(503, "not_ready", "index is still loading");
  }

  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception& e) {
    return error_response(400, "bad_request",
                           std::string("request body is not JSON: ") + e.what());
  }
  if (!request.is_object() || !request.contains("views") ||
      !request["views"].is_array() || !request.contains("strategy") ||
      !request["strategy"].is_string()) {
    return error_response(
        400, "bad_request",
        "request needs a 'views' array and a 'strategy' string");
  }

  std::size_t topk = kDefaultTopK;
  if (request.contains("topk")) {
    const auto& t = request["topk"];
    if (!t.is_number_integer() || t.get<std::int64_t>() < 1) {
      return error_response(400, "out_of_range",
                            "'topk' must be a positive integer");
    }
    topk = t.get<std::size_t>();
  }

  const auto strategy = parse_strategy(request["strategy"].get<std::string>());
  if (!strategy) {
    return error_response(400, "unknown_strategy",
                          "unknown strategy '" +
                              request["strategy"].get<std::string>() +
                              "'; valid strategies: " + valid_strategy_names());
  }

  ViewSet views;
  for (const auto& v : request["views"]) {
    if (!v.is_array() || v.size() != db->dim()) {
      return error_response(400, "dimension_mismatch",
                            "every view must be an array of " +
                                std::to_string(db->dim()) +
                                " numbers (expected dim " +
                                std::to_string(db->dim()) + ")");
    }
    std::vector<float> values;
    values.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) {
        return error_response(400, "bad_request",
                              "view components must be numbers");
      }
      values.push_back(x.get<float>());
    }
    views.emplace_back(std::move(values));
  }

  RankOptions options;
  options.renormalize_ef = request.value("renormalize_ef", false);
  options.late.literal_min_wavg = request.value("literal_minwavg", false);

  try {
    for (const auto& v : views) validate_features(v.values());
    views = normalize_views(views);
    const auto ranked = rank(*db, views, *strategy, topk, options);
    json results = json::array();
    for (const auto& entry : ranked) {
      results.push_back({{"object_id", entry.object_id},
                         {"category", db->object(entry.object_index).category},
                         {"distance", entry.distance}});
    }
    const double took_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    return json_response(200, {{"results", std::move(results)},
                               {"strategy", strategy_name(*strategy)},
                               {"took_ms", took_ms}});
  } catch (const Error& e) {
    return error_response(status_for(e.code()), error_code_name(e.code()),
                          e.what());
  }
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const QueryService& service)
    : impl_(std::make_unique<Impl>()) {
  const auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Post("/query", [&service, reply](const httplib::Request& req,
                                                 httplib::Response& res) {
    reply(res, service.handle_query(req.body));
  });
  impl_->server.Get("/health", [&service, reply](const httplib::Request&,
                                                 httplib::Response& res) {
    reply(res, service.handle_health());
  });
  impl_->server.set_error_handler(
      [reply](const httplib::Request& req, httplib::Response& res) {
        if (res.status == 404) {
          reply(res, error_response(404, "not_found",
                                    "no route for " + req.method + " " +
                                        req.path));
        }
      });
  impl_->server.set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res,
              std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, error_response(500, "internal", what));
      });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound > 0) return bound;
  } else if (impl_->server.bind_to_port(host, port)) {
    return port;
  }
  throw Error(ErrorCode::kIoError,
              "cannot bind " + host + ":" + std::to_string(port));
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace mvs
