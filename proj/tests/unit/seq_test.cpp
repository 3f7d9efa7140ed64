#include <doctest.h>

#include <algorithm>

#include "cerl/examples.hpp"
#include "cerl/generate.hpp"
#include "cerl/props.hpp"
#include "cerl/text.hpp"
#include "oracles.hpp"

using namespace cerl;

namespace {

Value run(std::string_view src, std::size_t fuel = 10000) {
  auto out = seq_eval({}, parse_expr(src), fuel);
  REQUIRE(std::holds_alternative<Finished>(out));
  return std::get<Finished>(out).value;
}

}  // namespace

TEST_SUITE("seq") {
  TEST_CASE("map program against a direct computation") {
    std::vector<int> in{0, 1, 2}, expect(3);
    std::transform(in.begin(), in.end(), expect.begin(), [](int x) { return x + 1; });
    std::vector<Value> vs;
    for (int x : expect) vs.push_back(Value::integer(x));
    CHECK(run(examples::kMapSource) == Value::list(vs));
  }

  TEST_CASE("lists evaluate tail first") {
    auto s = seq_step_tagged({}, parse_expr("[call '+'(1, 1) | call '+'(2, 2)]"));
    REQUIRE(s);
    CHECK(s->rule == SeqRule::Push);
    CHECK(print(s->redex) == "call '+'(2, 2)");
  }

  TEST_CASE("letrec substitutes in place") {
    auto s = seq_step_tagged({}, parse_expr("letrec 'f'/0 = fun() -> 1 in apply 'f'/0()"));
    REQUIRE(s);
    CHECK(s->rule == SeqRule::Letrec);
    CHECK(s->stack.empty());
    CHECK(run("letrec 'f'/0 = fun() -> 1 in apply 'f'/0()") == Value::integer(1));
  }

  TEST_CASE("case falls through to the else branch") {
    CHECK(run("case 'a' of 'b' then 1 else 2 end") == Value::integer(2));
    CHECK(run("case [1, 2] of [X|T] then X else 0 end") == Value::integer(1));
  }

  TEST_CASE("redex classification") {
    auto cls = [](std::string_view src) {
      auto out = seq_eval({}, parse_expr(src), 100);
      REQUIRE(std::holds_alternative<Suspended>(out));
      return std::get<Suspended>(out).cls;
    };
    CHECK(std::holds_alternative<Stuck>(cls("call '+'('a', 1)")));
    CHECK(std::holds_alternative<Stuck>(cls("apply 3(1)")));
    CHECK(std::holds_alternative<Stuck>(cls("call 'nosuch'(1)")));
    CHECK(std::holds_alternative<ReceiveRedex>(cls("let X = receive Y -> Y end in X")));
    auto d = cls("let X = call '!'(#2, 'hi') in X");
    REQUIRE(std::holds_alternative<ConcDispatch>(d));
    CHECK(std::get<ConcDispatch>(d).bif.name == "!");
    CHECK(std::holds_alternative<SendShape>(std::get<ConcDispatch>(d).shape));
    CHECK(std::get<ConcDispatch>(d).rest.size() == 1);
    CHECK(std::holds_alternative<SelfShape>(std::get<ConcDispatch>(cls("call 'self'()")).shape));
    CHECK(std::holds_alternative<Exit1Shape>(std::get<ConcDispatch>(cls("call 'exit'('x')")).shape));
    CHECK(std::holds_alternative<FinalValue>(classify_redex({}, parse_expr("1"))));
  }

  TEST_CASE("out of fuel keeps the configuration") {
    auto out = seq_eval({}, parse_expr(examples::kMapSource), 3);
    REQUIRE(std::holds_alternative<OutOfFuel>(out));
    auto resumed = seq_eval(std::get<OutOfFuel>(out).stack, std::get<OutOfFuel>(out).redex, 10000);
    REQUIRE(std::holds_alternative<Finished>(resumed));
    CHECK(print(std::get<Finished>(resumed).value) == "[1, 2, 3]");
  }

  TEST_CASE("small-step agrees with a big-step evaluator on generated programs") {
    Generator gen(11);
    std::size_t finished = 0;
    for (int i = 0; i < 1000; ++i) {
      const Expr e = gen.seq_expr(4);
      auto small = seq_eval({}, e, 20000);
      auto big = oracle::Evaluator(20000).eval(e);
      if (std::holds_alternative<OutOfFuel>(small) || std::holds_alternative<oracle::Diverged>(big)) continue;
      if (const auto* f = std::get_if<Finished>(&small)) {
        ++finished;
        REQUIRE_MESSAGE(std::holds_alternative<Value>(big), print(e));
        CHECK_MESSAGE(std::get<Value>(big) == f->value, print(e));
      } else {
        CHECK_MESSAGE(std::holds_alternative<oracle::Blocked>(big), print(e));
      }
    }
    CHECK(finished > 500);
  }

  TEST_CASE("each step matches the single applicable rule") {
    Generator gen(5);
    for (int i = 0; i < 300; ++i) {
      auto [k, e] = gen.seq_config();
      auto rules = seq_rule_results(k, e);
      auto step = seq_step(k, e);
      REQUIRE(rules.size() <= 1);
      CHECK(step.has_value() == !rules.empty());
      if (step && !rules.empty()) {
        CHECK(step->first == rules[0].first);
        CHECK(step->second == rules[0].second);
      }
    }
  }
}
