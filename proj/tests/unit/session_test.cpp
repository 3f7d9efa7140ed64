#include <doctest.h>

#include <filesystem>

#include "cerl/examples.hpp"
#include "cerl/session.hpp"

using namespace cerl;

namespace {

json signal_order_config() { return node_to_config(examples::signal_order_node()); }

json post(SessionService& svc, const std::string& path, const json& body, int expect) {
  ApiResponse r = svc.handle("POST", path, body.dump());
  CHECK_MESSAGE(r.status == expect, r.body.dump());
  return r.body;
}

/// Index of the first enabled step whose pid and action text match.
std::size_t pick(const json& enabled, int pid, const std::string& text) {
  for (const auto& e : enabled) {
    if (e["pid"] == pid && e["text"].get<std::string>().find(text) != std::string::npos) {
      return e["index"].get<std::size_t>();
    }
  }
  FAIL("no step " << text << " for #" << pid);
  return 0;
}

}  // namespace

TEST_SUITE("session") {
  TEST_CASE("stepping, undo and trace") {
    SessionService svc;
    json s = post(svc, "/sessions", signal_order_config(), 201);
    const std::string id = s["session_id"];
    const std::string base = "/sessions/" + id;
    CHECK(s["version"] == 0);
    CHECK(s["trace_length"] == 0);
    CHECK(s["enabled"].size() == 1);

    json after = post(svc, base + "/step", {{"index", 0}, {"version", 0}}, 200);
    CHECK(after["version"] == 1);
    CHECK(after["trace_length"] == 1);
    CHECK(after["step"]["text"] == "tau");

    post(svc, base + "/step", {{"index", 0}, {"version", 0}}, 409);
    post(svc, base + "/step", {{"index", 99}}, 409);
    post(svc, base + "/step", json::object(), 422);

    json undone = post(svc, base + "/undo", json::object(), 200);
    CHECK(undone["trace_length"] == 0);
    CHECK(undone["version"] == 2);
    post(svc, base + "/undo", json::object(), 409);

    ApiResponse trace = svc.handle("GET", base + "/trace", "");
    CHECK(trace.status == 200);
    CHECK(trace.body.empty());
  }

  TEST_CASE("the fst interleaving can be driven to its end") {
    SessionService svc;
    const std::string base = "/sessions/" + post(svc, "/sessions", signal_order_config(), 201)["session_id"].get<std::string>();
    json st = svc.handle("GET", base, "").body;
    // #1 sends 'fst' then 'snd'; 'snd' is delivered to #3 only after #2 forwarded 'fst'.
    auto step = [&](int pid, const std::string& text) {
      st = post(svc, base + "/step", {{"index", pick(st["enabled"], pid, text)}}, 200);
    };
    auto has = [&](int pid, const std::string& text) {
      for (const auto& e : st["enabled"]) {
        if (e["pid"] == pid && e["text"] == text) return true;
      }
      return false;
    };
    auto taus = [&](int pid) {
      while (has(pid, "tau")) step(pid, "tau");
    };
    taus(1);
    step(1, "send #1 -> #2");
    taus(1);
    step(1, "send #1 -> #3");
    step(2, "arrive");
    step(2, "receive");
    taus(2);
    step(2, "send #2 -> #3");
    step(3, "arrive #2 -> #3");
    step(3, "receive 'fst'");
    json trace = svc.handle("GET", base + "/trace", "").body;
    Replay r = run_trace(examples::signal_order_node(), trace_from_json(trace));
    REQUIRE(r.ok());
    CHECK(render_node(r.node) == st["state"]);
  }

  TEST_CASE("automatic stepping") {
    SessionService svc;
    const std::string base = "/sessions/" + post(svc, "/sessions", {{"node_config", signal_order_config()}}, 201)["session_id"].get<std::string>();
    json out = post(svc, base + "/auto", {{"policy", "random"}, {"steps", 1000}, {"seed", 4}}, 200);
    CHECK(out["enabled"].empty());
    CHECK(out["steps"].size() == out["trace_length"]);
    post(svc, base + "/auto", {{"policy", "greedy"}}, 422);
  }

  TEST_CASE("errors") {
    SessionService svc;
    CHECK(svc.handle("GET", "/sessions/nope", "").status == 404);
    CHECK(svc.handle("GET", "/other", "").status == 404);
    CHECK(svc.handle("POST", "/sessions", "{").status == 400);
    CHECK(svc.handle("POST", "/sessions", R"({"processes": [{"pid": 1}]})").status == 422);
    CHECK(svc.handle("PUT", "/sessions", "").status == 405);
  }

  TEST_CASE("listing and deleting") {
    SessionService svc;
    post(svc, "/sessions", signal_order_config(), 201);
    post(svc, "/sessions", signal_order_config(), 201);
    CHECK(svc.handle("GET", "/sessions", "").body["sessions"].size() == 2);
    CHECK(svc.handle("DELETE", "/sessions/s1", "").status == 200);
    CHECK(svc.session_count() == 1);
    CHECK(svc.handle("GET", "/sessions/s1", "").status == 404);
  }

  TEST_CASE("sessions survive a restart through snapshots") {
    const auto dir = std::filesystem::temp_directory_path() / "cerl_session_test";
    std::filesystem::remove_all(dir);
    std::string id;
    json state;
    {
      SessionService svc(dir);
      id = post(svc, "/sessions", signal_order_config(), 201)["session_id"];
      state = post(svc, "/sessions/" + id + "/auto", {{"steps", 6}, {"seed", 1}}, 200);
    }
    SessionService again(dir);
    CHECK(again.session_count() == 1);
    ApiResponse r = again.handle("GET", "/sessions/" + id, "");
    REQUIRE(r.status == 200);
    CHECK(r.body["state"] == state["state"]);
    CHECK(r.body["trace_length"] == 6);
    std::filesystem::remove_all(dir);
  }
}
