#pragma once

// HTTP front end for the session service.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "cerl/session.hpp"

namespace cerl::http {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 0;
  std::optional<std::filesystem::path> static_dir;
};

/// CERL_PORT when set to a valid port, otherwise 8080.
int default_port();

class Server {
 public:
  Server(SessionService& service, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket and returns the port, or -1 on failure.
  int bind();
  /// Serves until stop() is called. Requires a successful bind().
  void listen();
  /// bind() and serve on a background thread. Returns the port or -1.
  int start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace cerl::http
