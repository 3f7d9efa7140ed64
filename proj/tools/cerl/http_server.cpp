#include "http_server.hpp"

#include <cstdlib>

#include <httplib.h>

namespace cerl::http {

int default_port() {
  if (const char* env = std::getenv("CERL_PORT")) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return 8080;
}

struct Server::Impl {
  SessionService& service;
  ServerOptions options;
  httplib::Server server;
  int port = -1;

  void forward(const char* method, const httplib::Request& req, httplib::Response& res) {
    ApiResponse out = service.handle(method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  }
};

Server::Server(SessionService& service, ServerOptions options)
    : impl_(new Impl{service, std::move(options), {}, -1}) {
  auto& s = impl_->server;
  Impl* impl = impl_.get();
  const char* pattern = R"(/sessions(/.*)?)";
  s.Get(pattern, [impl](const auto& req, auto& res) { impl->forward("GET", req, res); });
  s.Post(pattern, [impl](const auto& req, auto& res) { impl->forward("POST", req, res); });
  s.Delete(pattern, [impl](const auto& req, auto& res) { impl->forward("DELETE", req, res); });
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(pattern, [](const auto&, auto& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (impl_->options.static_dir) s.set_mount_point("/", impl_->options.static_dir->string());
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
  } else {
    impl_->port = impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  return impl_->port;
}

void Server::listen() { impl_->server.listen_after_bind(); }

int Server::start() {
  if (bind() < 0) return -1;
  thread_ = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void Server::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace cerl::http
