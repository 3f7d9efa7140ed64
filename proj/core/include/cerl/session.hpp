#pragma once

// Interactive stepping sessions and the request dispatcher behind the HTTP
// service. The dispatcher is transport independent: it maps a method, a path
// and a body to a status code and a JSON document.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cerl/explorer.hpp"
#include "cerl/json_io.hpp"

namespace cerl {

class Session {
 public:
  Session(std::string id, json config);

  const std::string& id() const { return id_; }
  const json& config() const { return config_; }
  const Node& initial() const { return initial_; }
  const Node& current() const { return current_; }
  const Trace& trace() const { return trace_; }
  /// Bumped by every step and undo.
  std::uint64_t version() const { return version_; }
  const std::vector<Transition>& enabled() const { return enabled_; }

  /// Takes the enabled step with this index. False when out of range.
  bool step(std::size_t index);
  /// False when there is nothing to undo.
  bool undo();

  /// Serializable state: the configuration and the trace taken so far.
  json snapshot() const;
  static std::shared_ptr<Session> restore(const std::string& id, const json& snapshot);

  mutable std::mutex mutex;

 private:
  void refresh();

  std::string id_;
  json config_;
  Node initial_;
  Node current_;
  std::vector<Node> history_;
  Trace trace_;
  std::vector<Transition> enabled_;
  std::uint64_t version_ = 0;
};

struct ApiResponse {
  int status = 200;
  json body;
};

class SessionService {
 public:
  /// When `snapshot_dir` is set, sessions are written there after every
  /// change and restored from it on construction.
  explicit SessionService(std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

  std::size_t session_count() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  void save(const Session& s) const;

  ApiResponse create(const json& body);
  ApiResponse session_route(Session& s, const std::string& method, const std::string& action,
                            const json& body);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::optional<std::filesystem::path> snapshot_dir_;
};

/// The indexed list of enabled steps as served to clients.
json enabled_to_json(const std::vector<Transition>& enabled);

}  // namespace cerl
