#include <doctest.h>

#include "cerl/props.hpp"
#include "cerl/text.hpp"

using namespace cerl;

namespace {

LiveProcess live(std::string_view src) { return std::get<LiveProcess>(make_process(parse_expr(src))); }

/// Runs tau steps until something else is needed.
LiveProcess settle(LiveProcess p) {
  while (auto next = local_apply(p, TauAction{})) p = std::get<LiveProcess>(*next);
  return p;
}

const Pid kSelf{1}, kOther{2}, kThird{3};
const Value kNormal = Value::atom("normal"), kKill = Value::atom("kill"),
            kKilled = Value::atom("killed"), kOdd = Value::atom("odd");

}  // namespace

TEST_SUITE("process") {
  TEST_CASE("exit decisions on named cases") {
    const std::vector<Pid> none, linked{kOther};
    // untrapped explicit kill is always fatal and reported as 'killed'
    CHECK(exit_decision(false, kKill, false, kOther, kSelf, none) == ExitOutcome{TerminateWith{kKilled}});
    CHECK(exit_decision(true, kKill, false, kOther, kSelf, none) == ExitOutcome{TerminateWith{kKilled}});
    // 'normal' from someone else is ignored unless trapped
    CHECK(exit_decision(false, kNormal, false, kOther, kSelf, none) == ExitOutcome{DropSignal{}});
    CHECK(exit_decision(true, kNormal, false, kOther, kSelf, none) == ExitOutcome{ConvertToMessage{}});
    // 'normal' sent to oneself terminates
    CHECK(exit_decision(false, kNormal, false, kSelf, kSelf, none) == ExitOutcome{TerminateWith{kNormal}});
    // a 'kill' travelling over a link is an ordinary reason
    CHECK(exit_decision(false, kKill, true, kOther, kSelf, linked) == ExitOutcome{TerminateWith{kKill}});
    CHECK(exit_decision(true, kKill, true, kOther, kSelf, linked) == ExitOutcome{ConvertToMessage{}});
    // link signals from processes no longer linked are dropped
    CHECK(exit_decision(false, kOdd, true, kOther, kSelf, none) == ExitOutcome{DropSignal{}});
    CHECK(exit_decision(false, kOdd, false, kOther, kSelf, none) == ExitOutcome{TerminateWith{kOdd}});
    CHECK(exit_decision(true, kOdd, true, kSelf, kSelf, none) == ExitOutcome{NoRule{}});
  }

  TEST_CASE("exit message shape") {
    CHECK(print(exit_message(kSelf, kKilled)) == "['EXIT', #1, 'killed']");
  }

  TEST_CASE("send continues with the payload") {
    auto p = settle(live("let X = call '!'(#2, 'hi') in X"));
    auto acts = local_enabled(p, kSelf, Pid{9});
    REQUIRE(acts.size() == 1);
    CHECK(acts[0] == Action{SendAction{kSelf, kOther, Message{Value::atom("hi")}}});
    auto next = local_apply(p, acts[0]);
    REQUIRE(next);
    CHECK(settle(std::get<LiveProcess>(*next)).redex == val(Value::atom("hi")));
    CHECK_FALSE(local_apply(p, SendAction{kSelf, kThird, Message{Value::atom("hi")}}));
  }

  TEST_CASE("receive takes the oldest matching message") {
    auto p = live("receive 'b' -> 1 end");
    CHECK(local_enabled(p, kSelf, Pid{9}).empty());
    p.mailbox = {Value::atom("a"), Value::atom("b"), Value::atom("b")};
    auto acts = local_enabled(p, kSelf, Pid{9});
    REQUIRE(acts.size() == 1);
    auto next = std::get<LiveProcess>(*local_apply(p, acts[0]));
    CHECK(next.mailbox == Mailbox{Value::atom("a"), Value::atom("b")});
    CHECK(next.redex == val(Value::integer(1)));
  }

  TEST_CASE("links, unlinks and arrivals") {
    auto p = settle(live("call 'link'(#2)"));
    auto q = std::get<LiveProcess>(*local_apply(p, SendAction{kSelf, kOther, LinkSignal{}}));
    CHECK(q.links == std::vector<Pid>{kOther});
    q = std::get<LiveProcess>(*local_apply(q, ArriveAction{kThird, kSelf, LinkSignal{}}));
    CHECK(q.links == std::vector<Pid>{kThird, kOther});
    q = std::get<LiveProcess>(*local_apply(q, ArriveAction{kOther, kSelf, UnlinkSignal{}}));
    CHECK(q.links == std::vector<Pid>{kThird});
    q = std::get<LiveProcess>(*local_apply(q, ArriveAction{kOther, kSelf, Message{kOdd}}));
    CHECK(q.mailbox == Mailbox{kOdd});
  }

  TEST_CASE("termination leaves one obligation per link") {
    auto p = live("'done'");
    p.links = {kOther, kThird};
    auto dead = local_apply(p, TerminateAction{});
    REQUIRE(dead);
    const auto& d = std::get<DeadProcess>(*dead);
    REQUIRE(d.obligations.size() == 2);
    CHECK(d.obligations[0] == std::pair{kOther, kNormal});
    auto acts = local_enabled(*dead, kSelf, Pid{9});
    REQUIRE(acts.size() == 1);
    CHECK(acts[0] == Action{SendAction{kSelf, kOther, ExitSignal{kNormal, true}}});
    auto rest = local_apply(*dead, acts[0]);
    CHECK(std::get<DeadProcess>(*rest).obligations.size() == 1);
    CHECK_FALSE(local_apply(*dead, ArriveAction{kOther, kSelf, Message{kOdd}}));
  }

  TEST_CASE("exit/1 terminates with its reason") {
    auto p = settle(live("call 'exit'('bye')"));
    p.links = {kOther};
    auto dead = std::get<DeadProcess>(*local_apply(p, TerminateAction{}));
    CHECK(dead.obligations == std::vector<std::pair<Pid, Value>>{{kOther, Value::atom("bye")}});
  }

  TEST_CASE("process_flag returns the old value") {
    auto p = settle(live("call 'process_flag'('trap_exit', 'true')"));
    auto next = std::get<LiveProcess>(*local_apply(p, FlagAction{}));
    CHECK(next.trap_exit);
    CHECK(next.redex == val(Value::atom("false")));
  }

  TEST_CASE("self and spawn use the pids given by the node") {
    auto s = settle(live("call 'self'()"));
    CHECK(std::get<LiveProcess>(*local_apply(s, SelfAction{Pid{4}})).redex == val(Value::pid(Pid{4})));
    auto sp = settle(live("call 'spawn'(fun() -> 1 end, [])"));
    auto acts = local_enabled(sp, kSelf, Pid{7});
    REQUIRE(acts.size() == 1);
    REQUIRE(std::holds_alternative<SpawnAction>(acts[0]));
    CHECK(std::get<SpawnAction>(acts[0]).pid == Pid{7});
    CHECK(std::get<LiveProcess>(*local_apply(sp, acts[0])).redex == val(Value::pid(Pid{7})));
  }

  TEST_CASE("local steps agree with the rule oracle") {
    PropsConfig cfg;
    cfg.cases = 300;
    auto r = check_local_determinism(cfg);
    CHECK(r.cases >= 300);
    CHECK_MESSAGE(r.ok(), (r.samples.empty() ? "" : r.samples.front()));
  }
}
