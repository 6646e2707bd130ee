#include "qirk/Server.h"

#include <httplib.h>

namespace qirk {

namespace {

void sendJson(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

Server::Server(std::shared_ptr<const Engine> engine)
    : engine_(std::move(engine)), http_(std::make_unique<httplib::Server>()) {
  http_->Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    sendJson(res, 200,
             {{"status", "ok"},
              {"entities", engine_->store().entities().size()},
              {"properties", engine_->store().properties().size()},
              {"statements", engine_->store().statements().size()},
              {"index_vectors", engine_->index().size()},
              {"provider", engine_->index().provider().name()}});
  });

  http_->Get(R"(/api/entity/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    nlohmann::json body = engine_->entityJson(id);
    if (body.is_null()) {
      sendJson(res, 404, {{"error", {{"stage", "lookup"}, {"message", "unknown id '" + id + "'"}}}});
      return;
    }
    sendJson(res, 200, body);
  });

  http_->Post("/api/ask", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception& e) {
        throw StageError("request", 400, e.what(),
                         {{"error", {{"stage", "request"}, {"message", "body is not JSON"}}}});
      }
      sendJson(res, 200, engine_->ask(AskRequest::fromJson(body)));
    } catch (const StageError& e) {
      sendJson(res, e.status(), e.partial());
    }
  });

  http_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unknown error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        sendJson(res, 500, {{"error", {{"stage", "internal"}, {"message", message}}}});
      });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Server::listen() { http_->listen_after_bind(); }

int Server::start(const std::string& host, int port) {
  int bound = bind(host, port);
  thread_ = std::thread([this] { listen(); });
  http_->wait_until_ready();
  return bound;
}

void Server::stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace qirk
