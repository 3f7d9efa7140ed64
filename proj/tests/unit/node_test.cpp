#include <doctest.h>

#include <functional>

#include "cerl/examples.hpp"
#include "cerl/generate.hpp"
#include "cerl/text.hpp"

using namespace cerl;

namespace {

/// Follows the only enabled step of `pid` until `pred` holds.
Node drive(Node n, Pid pid, const std::function<bool(const Node&)>& pred) {
  for (int i = 0; i < 1000 && !pred(n); ++i) {
    bool moved = false;
    for (auto& t : node_successors(n)) {
      if (t.pid == pid) {
        n = t.target;
        moved = true;
        break;
      }
    }
    REQUIRE(moved);
  }
  return n;
}

}  // namespace

TEST_SUITE("node") {
  TEST_CASE("ether queues are FIFO per edge") {
    Ether d;
    d = d.push(Pid{1}, Pid{2}, Message{Value::integer(1)});
    d = d.push(Pid{1}, Pid{2}, Message{Value::integer(2)});
    d = d.push(Pid{3}, Pid{2}, Message{Value::integer(3)});
    CHECK(d.signal_count() == 3);
    auto first = d.pop_first(Pid{1}, Pid{2});
    REQUIRE(first);
    CHECK(first->first == Signal{Message{Value::integer(1)}});
    CHECK(first->second.queue(Pid{1}, Pid{2}).size() == 1);
    auto rest = first->second.pop_first(Pid{1}, Pid{2})->second;
    CHECK(rest.queue(Pid{1}, Pid{2}).empty());
    CHECK(rest.queues().size() == 1);
    CHECK_FALSE(d.pop_first(Pid{2}, Pid{1}));
  }

  TEST_CASE("empty queues are not stored") {
    Ether a;
    Ether b = a.push(Pid{1}, Pid{2}, LinkSignal{}).pop_first(Pid{1}, Pid{2})->second;
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
  }

  TEST_CASE("fresh pid is above every pid the node mentions") {
    Node n = examples::signal_order_node();
    CHECK(fresh_pid(n) == Pid{4});
    n.ether = n.ether.push(Pid{9}, Pid{1}, LinkSignal{});
    CHECK(fresh_pid(n) == Pid{10});
  }

  TEST_CASE("sends enter the ether and arrivals leave it") {
    Node n = examples::signal_order_node();
    n = drive(n, Pid{1}, [](const Node& m) { return !m.ether.empty(); });
    CHECK(n.ether.queue(Pid{1}, Pid{2}).size() == 1);
    bool arrival = false;
    for (const auto& t : node_successors(n)) {
      if (std::holds_alternative<ArriveAction>(t.action)) {
        arrival = true;
        CHECK(t.pid == Pid{2});
        CHECK(t.target.ether.empty());
        CHECK(std::get<LiveProcess>(t.target.pool.at(Pid{2})).mailbox == Mailbox{Value::atom("fst")});
      }
    }
    CHECK(arrival);
  }

  TEST_CASE("spawn adds a process at the fresh pid") {
    Node n = make_node({{Pid{1}, parse_expr("call 'spawn'(fun(X) -> X end, [5])")}});
    n = drive(n, Pid{1}, [](const Node& m) { return m.pool.size() == 2; });
    REQUIRE(n.pool.contains(Pid{2}));
    CHECK(std::get<LiveProcess>(n.pool.at(Pid{1})).redex == val(Value::pid(Pid{2})));
    n = drive(n, Pid{2}, [](const Node& m) {
      const auto& p = std::get<LiveProcess>(m.pool.at(Pid{2}));
      return p.stack.empty() && p.redex.as_value();
    });
    CHECK(std::get<LiveProcess>(n.pool.at(Pid{2})).redex == val(Value::integer(5)));
  }

  TEST_CASE("spawning onto an existing pid is refused") {
    Node n = make_node({{Pid{1}, parse_expr("call 'spawn'(fun() -> 1 end, [])")}, {Pid{2}, parse_expr("1")}});
    n = drive(n, Pid{1}, [](const Node& m) {
      return std::holds_alternative<ConcDispatch>(classify_redex(std::get<LiveProcess>(m.pool.at(Pid{1})).stack,
                                                                 std::get<LiveProcess>(m.pool.at(Pid{1})).redex));
    });
    const Value fn = parse_value("fun() -> 1 end");
    CHECK_FALSE(node_step(n, Pid{1}, SpawnAction{Pid{2}, fn, Value::nil()}));
  }

  TEST_CASE("finished processes leave the pool") {
    Node n = make_node({{Pid{1}, parse_expr("'x'")}});
    auto succ = node_successors(n);
    REQUIRE(succ.size() == 1);
    CHECK(std::holds_alternative<TerminateAction>(succ[0].action));
    Node dead = succ[0].target;
    REQUIRE(std::holds_alternative<DeadProcess>(dead.pool.at(Pid{1})));
    auto last = node_successors(dead);
    REQUIRE(last.size() == 1);
    CHECK(last[0].target.pool.empty());
    CHECK(node_successors(last[0].target).empty());
  }

  TEST_CASE("signals to dead processes stay in the ether") {
    Node n;
    n.pool.emplace(Pid{1}, DeadProcess{{{Pid{2}, Value::atom("r")}}});
    n.ether = n.ether.push(Pid{3}, Pid{1}, Message{Value::atom("late")});
    for (const auto& t : node_successors(n)) CHECK_FALSE(std::holds_alternative<ArriveAction>(t.action));
  }

  TEST_CASE("every enabled step replays through node_step") {
    Generator gen(21);
    for (int i = 0; i < 50; ++i) {
      Node n = gen.node();
      for (int depth = 0; depth < 20; ++depth) {
        auto succ = node_successors(n);
        if (succ.empty()) break;
        for (const auto& t : succ) {
          auto again = node_step(n, t.pid, t.action);
          REQUIRE(again);
          CHECK(*again == t.target);
          CHECK(hash_node(*again) == hash_node(t.target));
        }
        n = succ[gen.below(succ.size())].target;
      }
    }
  }
}
