#include "cerl/session.hpp"

#include <fstream>
#include <random>

#include "cerl/text.hpp"

namespace cerl {

Session::Session(std::string id, json config)
    : id_(std::move(id)), config_(std::move(config)), initial_(node_from_config(config_)) {
  current_ = initial_;
  refresh();
}

void Session::refresh() { enabled_ = node_successors(current_); }

bool Session::step(std::size_t index) {
  if (index >= enabled_.size()) return false;
  Transition t = enabled_[index];
  history_.push_back(current_);
  trace_.push_back({t.pid, t.action});
  current_ = std::move(t.target);
  ++version_;
  refresh();
  return true;
}

bool Session::undo() {
  if (history_.empty()) return false;
  current_ = std::move(history_.back());
  history_.pop_back();
  trace_.pop_back();
  ++version_;
  refresh();
  return true;
}

json Session::snapshot() const { return {{"config", config_}, {"trace", to_json(trace_)}}; }

std::shared_ptr<Session> Session::restore(const std::string& id, const json& snapshot) {
  auto out = std::make_shared<Session>(id, snapshot.at("config"));
  Session& s = *out;
  for (const auto& step : trace_from_json(snapshot.at("trace"))) {
    auto next = node_step(s.current_, step.pid, step.action);
    if (!next) throw ConfigError("snapshot trace does not replay for session " + id);
    s.history_.push_back(s.current_);
    s.trace_.push_back(step);
    s.current_ = std::move(*next);
    ++s.version_;
  }
  s.refresh();
  return out;
}

json enabled_to_json(const std::vector<Transition>& enabled) {
  json out = json::array();
  for (std::size_t i = 0; i < enabled.size(); ++i) {
    out.push_back({{"index", i},
                   {"pid", enabled[i].pid.id},
                   {"action", to_json(enabled[i].action)},
                   {"text", print_action(enabled[i].action)}});
  }
  return out;
}

// ---------------------------------------------------------------- service

namespace {

ApiResponse error(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

json state_payload(const Session& s) {
  return {{"session_id", s.id()},
          {"version", s.version()},
          {"state", render_node(s.current())},
          {"trace_length", s.trace().size()},
          {"enabled", enabled_to_json(s.enabled())}};
}

json step_entry(const TraceStep& step) {
  return {{"pid", step.pid.id}, {"action", to_json(step.action)}, {"text", print_action(step.action)}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path.substr(0, path.find('?'))) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::optional<std::uint64_t> uint_member(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) return std::nullopt;
  const json& v = body.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

SessionService::SessionService(std::optional<std::filesystem::path> snapshot_dir)
    : snapshot_dir_(std::move(snapshot_dir)) {
  if (!snapshot_dir_) return;
  std::filesystem::create_directories(*snapshot_dir_);
  for (const auto& entry : std::filesystem::directory_iterator(*snapshot_dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    json snap = json::parse(in, nullptr, false);
    if (snap.is_discarded()) continue;
    const std::string id = entry.path().stem().string();
    try {
      sessions_.emplace(id, Session::restore(id, snap));
    } catch (const std::exception&) {
      continue;  // unreadable snapshots are skipped
    }
    if (id.size() > 1 && id[0] == 's') {
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<Session> SessionService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionService::save(const Session& s) const {
  if (!snapshot_dir_) return;
  const auto path = *snapshot_dir_ / (s.id() + ".json");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << s.snapshot().dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

ApiResponse SessionService::create(const json& body) {
  const json& config = body.is_object() && body.contains("node_config") ? body.at("node_config") : body;
  std::string id;
  {
    std::unique_lock lock(mutex_);
    id = "s" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<Session>(id, config);
  {
    std::unique_lock lock(mutex_);
    sessions_.emplace(id, session);
  }
  std::lock_guard guard(session->mutex);
  save(*session);
  return {201, state_payload(*session)};
}

ApiResponse SessionService::session_route(Session& s, const std::string& method,
                                          const std::string& action, const json& body) {
  std::lock_guard guard(s.mutex);
  if (method == "GET" && action == "state") return {200, state_payload(s)};
  if (method == "GET" && action == "enabled") {
    return {200, {{"version", s.version()}, {"enabled", enabled_to_json(s.enabled())}}};
  }
  if (method == "GET" && action == "trace") return {200, to_json(s.trace())};
  if (method == "POST" && action == "step") {
    auto index = uint_member(body, "index");
    if (!index) return error(422, "missing 'index'");
    if (auto v = uint_member(body, "version"); v && *v != s.version()) {
      return error(409, "stale version: the enabled steps changed");
    }
    if (!s.step(*index)) return error(409, "no enabled step with index " + std::to_string(*index));
    save(s);
    json out = state_payload(s);
    out["step"] = step_entry(s.trace().back());
    return {200, out};
  }
  if (method == "POST" && action == "undo") {
    if (!s.undo()) return error(409, "nothing to undo");
    save(s);
    return {200, state_payload(s)};
  }
  if (method == "POST" && action == "auto") {
    const std::string policy =
        body.is_object() && body.contains("policy") ? body.at("policy").get<std::string>() : "random";
    if (policy != "random" && policy != "tau-only") return error(422, "unknown policy " + policy);
    const auto steps = uint_member(body, "steps").value_or(100);
    const auto seed = uint_member(body, "seed").value_or(0);
    std::mt19937_64 rng(seed);
    json taken = json::array();
    for (std::uint64_t i = 0; i < steps; ++i) {
      std::vector<std::size_t> choices;
      for (std::size_t k = 0; k < s.enabled().size(); ++k) {
        if (policy == "random" || is_tau(s.enabled()[k].action)) choices.push_back(k);
      }
      if (choices.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
      s.step(choices[pick(rng)]);
      taken.push_back(step_entry(s.trace().back()));
    }
    save(s);
    json out = state_payload(s);
    out["steps"] = taken;
    return {200, out};
  }
  return error(405, "method not allowed");
}

ApiResponse SessionService::handle(const std::string& method, const std::string& path,
                                   const std::string& body_text) {
  try {
    json body = json::object();
    if (!body_text.empty()) {
      body = json::parse(body_text, nullptr, false);
      if (body.is_discarded()) return error(400, "request body is not valid JSON");
    }
    const auto parts = split_path(path);
    if (parts.empty() || parts[0] != "sessions") return error(404, "not found");
    if (parts.size() == 1) {
      if (method == "POST") return create(body);
      if (method == "GET") {
        json ids = json::array();
        std::shared_lock lock(mutex_);
        for (const auto& [id, s] : sessions_) ids.push_back(id);
        return {200, {{"sessions", ids}}};
      }
      return error(405, "method not allowed");
    }
    auto session = find(parts[1]);
    if (!session) return error(404, "unknown session " + parts[1]);
    if (parts.size() == 2) {
      if (method == "DELETE") {
        std::unique_lock lock(mutex_);
        sessions_.erase(parts[1]);
        if (snapshot_dir_) std::filesystem::remove(*snapshot_dir_ / (parts[1] + ".json"));
        return {200, {{"deleted", parts[1]}}};
      }
      return session_route(*session, method == "GET" ? "GET" : method, "state", body);
    }
    if (parts.size() != 3) return error(404, "not found");
    return session_route(*session, method, parts[2], body);
  } catch (const ConfigError& e) {
    return error(422, e.what());
  } catch (const json::exception& e) {
    return error(422, e.what());
  }
}

}  // namespace cerl
