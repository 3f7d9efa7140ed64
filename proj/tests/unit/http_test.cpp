#include <doctest.h>

#include <httplib.h>

#include "cerl/examples.hpp"
#include "http_server.hpp"

using namespace cerl;

TEST_SUITE("http") {
  TEST_CASE("session API over loopback") {
    SessionService svc;
    http::Server server(svc, {});
    const int port = server.start();
    REQUIRE(port > 0);
    httplib::Client cli("127.0.0.1", port);

    auto created = cli.Post("/sessions", node_to_config(examples::exit_kill_node(true)).dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    const std::string id = json::parse(created->body)["session_id"];

    auto enabled = cli.Get("/sessions/" + id + "/enabled");
    REQUIRE(enabled);
    CHECK(enabled->status == 200);
    CHECK(json::parse(enabled->body)["enabled"].size() == 1);

    auto stepped = cli.Post("/sessions/" + id + "/step", R"({"index": 0})", "application/json");
    REQUIRE(stepped);
    CHECK(stepped->status == 200);
    CHECK(json::parse(stepped->body)["trace_length"] == 1);

    auto ran = cli.Post("/sessions/" + id + "/auto", R"({"steps": 500, "seed": 2})", "application/json");
    REQUIRE(ran);
    json done = json::parse(ran->body);
    CHECK(done["enabled"].empty());

    auto missing = cli.Get("/sessions/zzz");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    auto bad = cli.Post("/sessions", "not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto preflight = cli.Options("/sessions");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    auto gone = cli.Delete("/sessions/" + id);
    REQUIRE(gone);
    CHECK(gone->status == 200);
    server.stop();
  }

  TEST_CASE("static files are served next to the API") {
    const auto dir = std::filesystem::temp_directory_path() / "cerl_static_test";
    std::filesystem::create_directories(dir);
    { std::ofstream(dir / "index.html") << "<p>stepper</p>"; }
    SessionService svc;
    http::ServerOptions opts;
    opts.static_dir = dir;
    http::Server server(svc, opts);
    const int port = server.start();
    REQUIRE(port > 0);
    httplib::Client cli("127.0.0.1", port);
    auto page = cli.Get("/index.html");
    REQUIRE(page);
    CHECK(page->status == 200);
    CHECK(page->body == "<p>stepper</p>");
    server.stop();
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("port comes from the environment") {
    ::setenv("CERL_PORT", "9123", 1);
    CHECK(http::default_port() == 9123);
    ::setenv("CERL_PORT", "junk", 1);
    CHECK(http::default_port() == 8080);
    ::unsetenv("CERL_PORT");
    CHECK(http::default_port() == 8080);
  }
}
