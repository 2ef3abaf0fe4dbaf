#include "acceptance/server.hpp"

#include <cstdlib>
#include <functional>

#include <httplib.h>

namespace acceptance {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

}  // namespace

struct Server::Impl {
  explicit Impl(Engine e) : engine(std::move(e)) {}

  Engine engine;
  httplib::Server http;
};

Server::Server(Engine engine) : impl_(std::make_unique<Impl>(std::move(engine))) {
  auto& http = impl_->http;
  const Engine& engine_ref = impl_->engine;

  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

  http.Get("/api/model", [&engine_ref](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, engine_ref.model_info());
  });

  using Handler = json (Engine::*)(const json&) const;
  const auto post = [&](const char* route, Handler handler) {
    http.Post(route, [&engine_ref, handler](const httplib::Request& req,
                                            httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        send_json(res, 400, {{"error", "invalid_request"},
                             {"field", "body"},
                             {"message", std::string("malformed JSON: ") + e.what()}});
        return;
      }
      try {
        send_json(res, 200, (engine_ref.*handler)(body));
      } catch (const Error& e) {
        send_json(res, http_status_for(e), error_body(e));
      } catch (const json::exception& e) {
        send_json(res, 400, {{"error", "invalid_request"}, {"message", e.what()}});
      }
    });
  };
  post("/api/predict", &Engine::predict);
  post("/api/sweep", &Engine::sweep);
  post("/api/grid", &Engine::grid);
  post("/api/montecarlo", &Engine::montecarlo);
  post("/api/compare", &Engine::compare);
  post("/api/verify-paper", &Engine::verify_paper);

  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404) {
      send_json(res, 404, {{"error", "not_found"}, {"message", "no route " + req.path}});
    }
  });
  http.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        send_json(res, 500, {{"error", "internal"}, {"message", message}});
      });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::run() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

int resolve_port(int cli_port) {
  if (cli_port > 0) return cli_port;
  if (const char* env = std::getenv("ACCEPTANCE_ENGINE_PORT")) {
    char* end = nullptr;
    const long port = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && port > 0 && port < 65536) return static_cast<int>(port);
  }
  return 8080;
}

}  // namespace acceptance
