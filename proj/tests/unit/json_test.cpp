#include <doctest.h>

#include "cerl/generate.hpp"
#include "cerl/json_io.hpp"
#include "cerl/text.hpp"

using namespace cerl;

TEST_SUITE("json") {
  TEST_CASE("values round trip structurally") {
    Generator gen(2);
    for (int i = 0; i < 200; ++i) {
      const Value v = gen.value(3);
      CHECK(value_from_json(to_json(v)) == v);
    }
    CHECK(value_from_json(json(7)) == Value::integer(7));
    CHECK(value_from_json(json("['a', #3]")) == parse_value("['a', #3]"));
  }

  TEST_CASE("expressions round trip") {
    Generator gen(12);
    for (int i = 0; i < 200; ++i) {
      const Expr e = gen.seq_expr(4);
      CHECK(expr_from_json(to_json(e)) == e);
    }
  }

  TEST_CASE("node configurations round trip") {
    Generator gen(8);
    for (int i = 0; i < 100; ++i) {
      Node n = gen.node();
      auto run = random_run(n, i, 15);
      CHECK(node_from_config(node_to_config(run.node)) == run.node);
      CHECK(trace_from_json(to_json(run.trace)) == run.trace);
    }
  }

  TEST_CASE("malformed configurations are rejected") {
    CHECK_THROWS_AS(node_from_config(json::array()), ConfigError);
    CHECK_THROWS_AS(node_from_config(json::parse(R"({"processes": [{"expr": "1"}]})")), ConfigError);
    CHECK_THROWS_AS(node_from_config(json::parse(R"({"processes": [{"pid": 1, "expr": "let"}]})")), ConfigError);
    CHECK_THROWS_AS(
        node_from_config(json::parse(R"({"processes": [{"pid": 1, "expr": "1"}, {"pid": 1, "expr": "2"}]})")),
        ConfigError);
    CHECK_THROWS_AS(signal_from_json(json::parse(R"({"kind": "shout"})")), ConfigError);
  }

  TEST_CASE("rendered nodes are readable") {
    Node n = make_node({{Pid{1}, parse_expr("let X = 1 in X")}});
    n.ether = n.ether.push(Pid{2}, Pid{1}, Message{Value::atom("m")});
    json r = render_node(n);
    CHECK(r["processes"][0]["redex"] == "let X = 1 in X");
    CHECK(r["processes"][0]["status"] == "live");
    CHECK(r["ether"][0]["signals"][0] == "msg 'm'");
  }
}
