#include <doctest.h>

#include <queue>
#include <set>

#include "cerl/examples.hpp"
#include "cerl/explorer.hpp"
#include "cerl/generate.hpp"
#include "cerl/text.hpp"

using namespace cerl;

namespace {

/// Distinct reachable nodes by plain breadth-first search without bounds.
std::size_t count_reachable(const Node& start) {
  std::vector<Node> seen{start};
  std::queue<Node> todo;
  todo.push(start);
  while (!todo.empty()) {
    Node n = todo.front();
    todo.pop();
    for (auto& t : node_successors(n)) {
      if (std::find(seen.begin(), seen.end(), t.target) == seen.end()) {
        seen.push_back(t.target);
        todo.push(t.target);
      }
    }
  }
  return seen.size();
}

}  // namespace

TEST_SUITE("explorer") {
  TEST_CASE("state count matches an unbounded search") {
    for (const Node& n : {examples::exit_kill_node(true), examples::exit_kill_node(false), examples::let_kill_node()}) {
      Lts lts = explore(n, {});
      CHECK(lts.complete());
      CHECK(lts.size() == count_reachable(n));
    }
  }

  TEST_CASE("edges are exactly the node successors") {
    Lts lts = explore(examples::exit_kill_node(true), {});
    for (std::size_t s = 0; s < lts.size(); ++s) {
      auto succ = node_successors(lts.state(s));
      REQUIRE(lts.out(s).size() == succ.size());
      for (std::size_t i = 0; i < succ.size(); ++i) {
        const auto& e = lts.edges()[lts.out(s)[i]];
        CHECK(e.action == succ[i].action);
        CHECK(lts.state(e.to) == succ[i].target);
      }
    }
  }

  TEST_CASE("traces to states replay to those states") {
    Lts lts = explore(examples::signal_order_node(), {});
    for (std::size_t s = 0; s < lts.size(); s += 7) {
      Trace t = lts.trace_to(s);
      CHECK(t.size() == lts.depth(s));
      Replay r = run_trace(lts.state(Lts::initial), t);
      REQUIRE(r.ok());
      CHECK(r.node == lts.state(s));
    }
  }

  TEST_CASE("bounds truncate and are reported") {
    ExplorationConfig cfg;
    cfg.depth_bound = 5;
    Lts lts = explore(examples::map_node(), cfg);
    CHECK_FALSE(lts.complete());
    CHECK_FALSE(lts.truncated_states().empty());
    for (std::size_t s = 0; s < lts.size(); ++s) CHECK(lts.depth(s) <= 5);

    cfg = {};
    cfg.state_bound = 10;
    Lts small = explore(examples::signal_order_node(), cfg);
    CHECK(small.size() <= 10);
    CHECK_FALSE(small.complete());
  }

  TEST_CASE("tau-only exploration never leaves the sequential fragment") {
    ExplorationConfig cfg;
    cfg.tau_only = true;
    Lts lts = explore(examples::signal_order_node(), cfg);
    for (const auto& e : lts.edges()) CHECK(is_tau(e.action));
  }

  TEST_CASE("final values per process") {
    auto fv = final_values(explore(examples::signal_order_node(), {}));
    std::set<std::string> third;
    for (const auto& v : fv[Pid{3}]) third.insert(print(v));
    CHECK(third == std::set<std::string>{"'fst'", "'snd'"});
  }

  TEST_CASE("replay stops at the first disabled step") {
    Node n = examples::signal_order_node();
    Trace t{{Pid{1}, TauAction{}}, {Pid{3}, ReceiveAction{Value::atom("x")}}};
    Replay r = run_trace(n, t);
    REQUIRE_FALSE(r.ok());
    CHECK(*r.failed_at == 1);
  }

  TEST_CASE("random runs are reproducible from their seed") {
    Generator gen(4);
    for (int i = 0; i < 30; ++i) {
      Node n = gen.node();
      auto a = random_run(n, 99, 200);
      auto b = random_run(n, 99, 200);
      CHECK(a.trace == b.trace);
      CHECK(a.node == b.node);
      Replay r = run_trace(n, a.trace);
      REQUIRE(r.ok());
      CHECK(r.node == a.node);
    }
  }
}
