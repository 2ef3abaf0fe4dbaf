#pragma once

// Stateless JSON-over-HTTP front end for an Engine.
//
//   GET  /api/model
//   POST /api/predict | /api/sweep | /api/grid | /api/montecarlo
//        /api/compare | /api/verify-paper
//
// Malformed bodies answer 400, out-of-domain inputs 422, unknown routes 404.

#include <memory>
#include <string>

#include "acceptance/engine.hpp"

namespace acceptance {

class Server {
 public:
  explicit Server(Engine engine);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds host:port (port 0 picks a free one) and returns the bound port,
  /// or -1 on failure.
  int bind(const std::string& host, int port);

  /// Serves until stop(); call after a successful bind().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// --port if given (> 0), else ACCEPTANCE_ENGINE_PORT, else 8080.
int resolve_port(int cli_port);

}  // namespace acceptance
