#include "cerl/props.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "cerl/examples.hpp"
#include "cerl/generate.hpp"
#include "cerl/text.hpp"

namespace cerl {

void PropertyResult::fail(std::string what) {
  ++failures;
  if (samples.size() < 5) samples.push_back(std::move(what));
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class T>
const T* top_as(const FrameStack& k) {
  return k.empty() ? nullptr : std::get_if<T>(&k.top());
}

std::vector<Expr> drop_first(const std::vector<Expr>& xs) { return {xs.begin() + 1, xs.end()}; }

std::vector<Value> plus_one(std::vector<Value> xs, const Value& v) {
  xs.push_back(v);
  return xs;
}

bool is_bif(const CallArgs* f, const char* name, std::size_t done) {
  return f != nullptr && f->fn.is_atom(name) && f->done.size() == done && f->todo.empty();
}

std::string describe(const FrameStack& k, const Expr& e) {
  std::string s;
  for (const auto& f : k.frames()) s += print_frame(f) + " :: ";
  return s + "Id, " + print(e);
}

std::string describe(const Process& p) {
  if (const auto* d = std::get_if<DeadProcess>(&p)) {
    std::string s = "dead[";
    for (const auto& [pid, r] : d->obligations) s += " #" + std::to_string(pid.id) + ":" + print(r);
    return s + " ]";
  }
  const auto& l = std::get<LiveProcess>(p);
  std::string s = "live(" + describe(l.stack, l.redex) + ", mailbox [";
  for (const auto& m : l.mailbox) s += " " + print(m);
  return s + " ], trap " + (l.trap_exit ? "tt" : "ff") + ")";
}

}  // namespace

// ---------------------------------------------------------------- oracles

std::vector<std::pair<FrameStack, Expr>> seq_rule_results(const FrameStack& k, const Expr& e) {
  using Config = std::pair<FrameStack, Expr>;
  std::vector<Config> out;
  const Value* v = e.as_value();

  // Rules that extract the first redex.
  if (const auto* x = e.get_if<Let>()) out.emplace_back(k.push(LetFrame{x->var, x->body}), x->bound);
  if (const auto* x = e.get_if<ConsE>()) out.emplace_back(k.push(ConsTail{x->head}), x->tail);
  if (const auto* x = e.get_if<Apply>()) out.emplace_back(k.push(ApplyFun{x->args}), x->fn);
  if (const auto* x = e.get_if<Call>()) out.emplace_back(k.push(CallFun{x->args}), x->fn);
  if (const auto* x = e.get_if<Case>()) {
    out.emplace_back(k.push(CaseFrame{x->pattern, x->then_branch, x->else_branch}), x->scrutinee);
  }
  if (const auto* x = e.get_if<Letrec>()) {
    Bindings b;
    b.bind(x->id, Value::fun(x->id, x->params, x->fun_body));
    out.emplace_back(k, subst(x->body, b));
  }
  if (v == nullptr || k.empty()) return out;
  const FrameStack& rest = k.pop();

  // Rules that refill the top frame.
  if (const auto* f = top_as<ApplyFun>(k); f && !f->args.empty()) {
    out.emplace_back(rest.push(ApplyArgs{*v, {}, drop_first(f->args)}), f->args[0]);
  }
  if (const auto* f = top_as<CallFun>(k); f && !f->args.empty()) {
    out.emplace_back(rest.push(CallArgs{*v, {}, drop_first(f->args)}), f->args[0]);
  }
  if (const auto* f = top_as<ApplyArgs>(k); f && !f->todo.empty()) {
    out.emplace_back(rest.push(ApplyArgs{f->fn, plus_one(f->done, *v), drop_first(f->todo)}),
                     f->todo[0]);
  }
  if (const auto* f = top_as<CallArgs>(k); f && !f->todo.empty()) {
    out.emplace_back(rest.push(CallArgs{f->fn, plus_one(f->done, *v), drop_first(f->todo)}),
                     f->todo[0]);
  }
  if (const auto* f = top_as<ConsTail>(k)) out.emplace_back(rest.push(ConsHead{*v}), f->head);

  // Rules that consume the top frame.
  if (const auto* f = top_as<ApplyFun>(k); f && f->args.empty()) {
    if (const auto* fn = v->get_if<Fun>(); fn && fn->params.empty() && fn->id.arity == 0) {
      Bindings b;
      b.bind(fn->id, *v);
      out.emplace_back(rest, subst(fn->body, b));
    }
  }
  if (const auto* f = top_as<ApplyArgs>(k); f && f->todo.empty()) {
    const auto* fn = f->fn.get_if<Fun>();
    if (fn != nullptr && fn->params.size() == f->done.size() + 1 && fn->id.arity == fn->params.size()) {
      Bindings b;
      b.bind(fn->id, f->fn);
      for (std::size_t i = 0; i < f->done.size(); ++i) b.bind(fn->params[i], f->done[i]);
      b.bind(fn->params.back(), *v);
      out.emplace_back(rest, subst(fn->body, b));
    }
  }
  if (const auto* f = top_as<CallArgs>(k); is_bif(f, "+", 1)) {
    const auto* i1 = f->done[0].get_if<Integer>();
    const auto* i2 = v->get_if<Integer>();
    if (i1 && i2) out.emplace_back(rest, val(Value::integer(*i1 + *i2)));
  }
  if (const auto* f = top_as<LetFrame>(k)) {
    Bindings b;
    b.bind(f->var, *v);
    out.emplace_back(rest, subst(f->body, b));
  }
  if (const auto* f = top_as<ConsHead>(k)) out.emplace_back(rest, val(Value::cons(*v, f->tail)));
  if (const auto* f = top_as<CaseFrame>(k); f && is_match(f->pattern, *v)) {
    out.emplace_back(rest, subst(f->then_branch, *match_bind(f->pattern, *v)));
  }
  if (const auto* f = top_as<CaseFrame>(k); f && !is_match(f->pattern, *v)) {
    out.emplace_back(rest, f->else_branch);
  }
  return out;
}

std::size_t ExitPremises::count() const {
  return static_cast<std::size_t>(drop) + term_killed + term_reason + term_normal + convert;
}

ExitPremises exit_premises(bool trap, const Value& reason, bool link_flag, bool from_self,
                           bool linked) {
  const bool normal = reason.is_atom("normal");
  const bool kill = reason.is_atom("kill");
  ExitPremises p;
  p.drop = (!from_self && !trap && normal) || (!linked && link_flag && !from_self);
  p.term_killed = kill && !link_flag;
  p.term_reason_literal = !trap && !normal && (!link_flag || linked);
  p.term_reason = p.term_reason_literal && !(kill && !link_flag);
  p.term_normal = !trap && normal && from_self;
  p.convert = trap && ((!link_flag && !kill) || (link_flag && linked));
  return p;
}

std::vector<Process> local_rule_results(const Process& p, const Action& a) {
  std::vector<Process> out;
  if (const auto* dead = std::get_if<DeadProcess>(&p)) {
    const auto* s = std::get_if<SendAction>(&a);
    if (s && !dead->obligations.empty() && dead->obligations[0].first == s->dst &&
        s->signal == Signal{ExitSignal{dead->obligations[0].second, true}}) {
      out.push_back(DeadProcess{{dead->obligations.begin() + 1, dead->obligations.end()}});
    }
    return out;
  }
  const auto& live = std::get<LiveProcess>(p);
  const FrameStack& k = live.stack;
  const Value* v = live.redex.as_value();
  const auto with = [&](FrameStack stack, Expr redex) {
    LiveProcess next = live;
    next.stack = std::move(stack);
    next.redex = std::move(redex);
    return next;
  };
  const auto dead_with = [&](const Value& reason) {
    DeadProcess d;
    for (Pid l : live.links) d.obligations.emplace_back(l, reason);
    return d;
  };

  if (is_tau(a)) {
    for (auto& [k2, e2] : seq_rule_results(k, live.redex)) out.push_back(with(k2, e2));
  }

  if (const auto* arr = std::get_if<ArriveAction>(&a)) {
    if (const auto* m = std::get_if<Message>(&arr->signal)) {
      LiveProcess next = live;
      next.mailbox.push_back(m->value);
      out.push_back(next);
    }
    if (const auto* x = std::get_if<ExitSignal>(&arr->signal)) {
      const bool linked = std::count(live.links.begin(), live.links.end(), arr->src) > 0;
      auto pr = exit_premises(live.trap_exit, x->reason, x->link, arr->src == arr->dst, linked);
      if (pr.drop) out.push_back(live);
      if (pr.term_killed) out.push_back(dead_with(Value::atom("killed")));
      if (pr.term_reason) out.push_back(dead_with(x->reason));
      if (pr.term_normal) out.push_back(dead_with(Value::atom("normal")));
      if (pr.convert) {
        LiveProcess next = live;
        const Value items[] = {Value::atom("EXIT"), Value::pid(arr->src), x->reason};
        next.mailbox.push_back(Value::list(items));
        out.push_back(next);
      }
    }
    if (std::holds_alternative<LinkSignal>(arr->signal)) {
      LiveProcess next = live;
      next.links.insert(next.links.begin(), arr->src);
      out.push_back(next);
    }
    if (std::holds_alternative<UnlinkSignal>(arr->signal)) {
      LiveProcess next = live;
      std::erase(next.links, arr->src);
      out.push_back(next);
    }
  }

  const auto* top = top_as<CallArgs>(k);
  if (const auto* s = std::get_if<SendAction>(&a); s && v != nullptr) {
    const Value target = Value::pid(s->dst);
    if (is_bif(top, "!", 1) && top->done[0] == target && s->signal == Signal{Message{*v}}) {
      out.push_back(with(k.pop(), val(*v)));
    }
    if (is_bif(top, "exit", 1) && top->done[0] == target &&
        s->signal == Signal{ExitSignal{*v, false}}) {
      out.push_back(with(k.pop(), val(Value::atom("true"))));
    }
    if (is_bif(top, "link", 0) && *v == target && std::holds_alternative<LinkSignal>(s->signal)) {
      LiveProcess next = with(k.pop(), val(Value::atom("ok")));
      next.links.insert(next.links.begin(), s->dst);
      out.push_back(next);
    }
    if (is_bif(top, "unlink", 0) && *v == target && std::holds_alternative<UnlinkSignal>(s->signal)) {
      LiveProcess next = with(k.pop(), val(Value::atom("ok")));
      std::erase(next.links, s->dst);
      out.push_back(next);
    }
  }
  if (const auto* s = std::get_if<SelfAction>(&a); s && v && v->is_atom("self")) {
    if (const auto* f = top_as<CallFun>(k); f && f->args.empty()) {
      out.push_back(with(k.pop(), val(Value::pid(s->pid))));
    }
  }
  if (const auto* s = std::get_if<SpawnAction>(&a); s && v && is_bif(top, "spawn", 1)) {
    if (top->done[0].is<Fun>() && top->done[0] == s->fn && *v == s->args) {
      out.push_back(with(k.pop(), val(Value::pid(s->pid))));
    }
  }
  if (const auto* r = std::get_if<ReceiveAction>(&a)) {
    if (const auto* rec = live.redex.get_if<Receive>()) {
      // the oldest message matching any clause, then the first clause it matches
      const auto& q = live.mailbox;
      auto msg = std::find_if(q.begin(), q.end(), [&](const Value& m) {
        return std::any_of(rec->clauses.begin(), rec->clauses.end(),
                           [&](const Clause& c) { return is_match(c.pattern, m); });
      });
      if (msg != q.end() && *msg == r->value) {
        auto clause = std::find_if(rec->clauses.begin(), rec->clauses.end(),
                                   [&](const Clause& c) { return is_match(c.pattern, *msg); });
        LiveProcess next = with(k, subst(clause->body, *match_bind(clause->pattern, *msg)));
        next.mailbox.erase(std::find(next.mailbox.begin(), next.mailbox.end(), r->value));
        out.push_back(next);
      }
    }
  }
  if (std::holds_alternative<FlagAction>(a) && v && is_bif(top, "process_flag", 1) &&
      top->done[0].is_atom("trap_exit")) {
    if (auto flag = atom_to_bool(*v)) {
      LiveProcess next = with(k.pop(), val(Value::atom(live.trap_exit ? "true" : "false")));
      next.trap_exit = *flag;
      out.push_back(next);
    }
  }
  if (std::holds_alternative<TerminateAction>(a) && v) {
    if (k.empty()) out.push_back(dead_with(Value::atom("normal")));
    if (is_bif(top, "exit", 0)) out.push_back(dead_with(*v));
  }
  return out;
}

// ---------------------------------------------------------------- suites

PropertyResult check_seq_determinism(const PropsConfig& cfg) {
  const auto t0 = Clock::now();
  PropertyResult r{"sequential determinism"};
  Generator gen(cfg.seed);
  std::size_t stepping = 0;
  while (r.cases < cfg.cases) {
    auto [k, e] = gen.seq_config();
    // walk the whole run so that every configuration on it is checked
    for (std::size_t n = 0; n < 60 && r.cases < cfg.cases; ++n) {
      ++r.cases;
      auto oracle = seq_rule_results(k, e);
      auto once = seq_step(k, e);
      auto twice = seq_step(k, e);
      if (oracle.size() > 1) {
        r.fail(std::to_string(oracle.size()) + " rules apply to " + describe(k, e));
      } else if (once.has_value() != !oracle.empty()) {
        r.fail("stepping disagrees with the rule table on " + describe(k, e));
      } else if (once && (*once != oracle[0] || *once != *twice)) {
        r.fail("different successors for " + describe(k, e));
      }
      if (!once) break;
      ++stepping;
      k = once->first;
      e = once->second;
    }
  }
  r.note = std::to_string(stepping) + " configurations had a successor";
  r.seconds = since(t0);
  return r;
}

namespace {

/// Processes met along random runs of random nodes, with their pids.
std::vector<std::pair<Pid, Process>> sample_processes(Generator& gen, std::size_t want) {
  std::vector<std::pair<Pid, Process>> out;
  while (out.size() < want) {
    Node n = gen.node();
    const std::size_t steps = gen.below(12);
    RandomRun run = random_run(n, gen.rng()(), steps);
    for (const auto& [pid, p] : run.node.pool) out.emplace_back(pid, p);
  }
  return out;
}

std::vector<Action> probe_actions(Generator& gen, Pid self, const Process& p) {
  std::vector<Action> actions = local_enabled(p, self, Pid{99});
  for (int i = 0; i < 2; ++i) actions.push_back(ArriveAction{Pid{1 + gen.below(3)}, self, gen.signal()});
  // actions that are usually not enabled
  actions.push_back(TauAction{});
  actions.push_back(TerminateAction{});
  actions.push_back(FlagAction{});
  actions.push_back(SelfAction{Pid{1 + gen.below(3)}});
  actions.push_back(ReceiveAction{gen.value(1, false)});
  actions.push_back(SendAction{self, Pid{1 + gen.below(3)}, gen.signal()});
  return actions;
}

}  // namespace

PropertyResult check_local_determinism(const PropsConfig& cfg) {
  const auto t0 = Clock::now();
  PropertyResult r{"process-local determinism"};
  Generator gen(cfg.seed + 1);
  std::size_t fired = 0;
  while (r.cases < cfg.cases) {
    for (const auto& [pid, p] : sample_processes(gen, 8)) {
      for (const auto& a : probe_actions(gen, pid, p)) {
        ++r.cases;
        auto oracle = local_rule_results(p, a);
        auto once = local_apply(p, a);
        auto twice = local_apply(p, a);
        const std::string where = print_action(a) + " on " + describe(p);
        if (oracle.size() > 1) {
          r.fail(std::to_string(oracle.size()) + " rules apply to " + where);
        } else if (once.has_value() != !oracle.empty()) {
          r.fail("local step disagrees with the rule table for " + where);
        } else if (once && (*once != oracle[0] || *once != *twice)) {
          r.fail("different results for " + where);
        }
        fired += once.has_value();
      }
    }
  }
  r.note = std::to_string(fired) + " pairs were enabled";
  r.seconds = since(t0);
  return r;
}

PropertyResult check_exit_table() {
  const auto t0 = Clock::now();
  PropertyResult r{"exit decision table"};
  const Pid self{1};
  std::size_t gaps = 0;
  std::size_t literal_overlaps = 0;
  for (bool trap : {false, true}) {
    for (const char* reason : {"normal", "kill", "killed", "other"}) {
      for (bool link_flag : {false, true}) {
        for (bool from_self : {false, true}) {
          for (bool linked : {false, true}) {
            ++r.cases;
            const Value v = Value::atom(reason);
            const Pid src = from_self ? self : Pid{2};
            std::vector<Pid> links{Pid{3}};
            if (linked) links.push_back(src);
            auto pr = exit_premises(trap, v, link_flag, from_self, linked);
            std::string where = std::string("trap=") + (trap ? "tt" : "ff") + " reason=" + reason +
                                " link=" + (link_flag ? "tt" : "ff") +
                                " self=" + (from_self ? "yes" : "no") +
                                " linked=" + (linked ? "yes" : "no");
            if (pr.term_killed && pr.term_reason_literal) ++literal_overlaps;
            if (pr.count() > 1) r.fail("several premises hold for " + where);
            const bool documented_gap =
                link_flag && from_self && !linked && (trap || std::string(reason) != "normal");
            if ((pr.count() == 0) != documented_gap) r.fail("unexpected rule coverage for " + where);
            gaps += pr.count() == 0;

            ExitOutcome expected = NoRule{};
            if (pr.drop) expected = DropSignal{};
            if (pr.term_killed) expected = TerminateWith{Value::atom("killed")};
            if (pr.term_reason) expected = TerminateWith{v};
            if (pr.term_normal) expected = TerminateWith{Value::atom("normal")};
            if (pr.convert) expected = ConvertToMessage{};
            if (exit_decision(trap, v, link_flag, src, self, links) != expected) {
              r.fail("exit_decision disagrees with the premises for " + where);
            }
          }
        }
      }
    }
  }
  r.note = std::to_string(gaps) + " cases without a rule; " + std::to_string(literal_overlaps) +
           " cases where an explicit 'kill' also meets the reason-preserving premise";
  r.seconds = since(t0);
  return r;
}

namespace {

Expr send_expr(Pid dst, const Signal& s) {
  const Expr target = val(Value::pid(dst));
  if (const auto* m = std::get_if<Message>(&s)) return bif("!", {target, val(m->value)});
  if (const auto* x = std::get_if<ExitSignal>(&s)) return bif("exit", {target, val(x->reason)});
  if (std::holds_alternative<LinkSignal>(s)) return bif("link", {target});
  return bif("unlink", {target});
}

Signal sendable_signal(Generator& gen) {
  Signal s = gen.signal();
  if (auto* x = std::get_if<ExitSignal>(&s)) x->link = false;
  return s;
}

struct Monitored {
  Node node;
  std::vector<Signal> sent;  // on the watched edge, in send order
  std::size_t arrived = 0;
  std::size_t depth = 0;
};

}  // namespace

PropertyResult check_signal_ordering(const PropsConfig& cfg) {
  const auto t0 = Clock::now();
  PropertyResult r{"signal ordering"};
  Generator gen(cfg.seed + 2);
  const Pid src{1}, dst{2};
  std::size_t both_arrived = 0;
  std::size_t states = 0;
  for (std::size_t c = 0; c < cfg.ordering_cases; ++c) {
    ++r.cases;
    Signal s1 = sendable_signal(gen), s2 = sendable_signal(gen);
    while (s2 == s1) s2 = sendable_signal(gen);
    Expr first = let("A", send_expr(dst, s1), let("B", send_expr(dst, s2), val(Value::atom("ok"))));
    std::vector<std::pair<Pid, Expr>> programs{{src, first}};
    Expr receiver = val(Value::atom("done"));
    for (std::size_t i = gen.below(3); i > 0; --i) {
      receiver = let("R" + std::to_string(i), receive({{Pattern::var("M"), var("M")}}), receiver);
    }
    programs.emplace_back(dst, receiver);
    if (gen.chance(0.5)) programs.emplace_back(Pid{3}, send_expr(dst, Message{gen.value(1, false)}));
    Node start = make_node(programs);
    std::get<LiveProcess>(start.pool.at(dst)).trap_exit = gen.chance(0.5);

    // breadth-first search over the node paired with a record of the watched edge
    std::unordered_map<Node, std::vector<std::pair<std::vector<Signal>, std::size_t>>, NodeHash> seen;
    std::deque<Monitored> queue{{start, {}, 0, 0}};
    bool violated = false;
    bool complete_delivery = false;
    while (!queue.empty() && !violated) {
      Monitored m = std::move(queue.front());
      queue.pop_front();
      auto& marks = seen[m.node];
      const auto mark = std::pair{m.sent, m.arrived};
      if (std::find(marks.begin(), marks.end(), mark) != marks.end()) continue;
      marks.push_back(mark);
      ++states;
      if (m.arrived >= 2) complete_delivery = true;
      if (m.depth >= 60) continue;
      for (auto& t : node_successors(m.node)) {
        Monitored next{std::move(t.target), m.sent, m.arrived, m.depth + 1};
        if (const auto* s = std::get_if<SendAction>(&t.action); s && s->src == src && s->dst == dst) {
          next.sent.push_back(s->signal);
        }
        if (const auto* a = std::get_if<ArriveAction>(&t.action); a && a->src == src && a->dst == dst) {
          if (m.arrived >= m.sent.size() || m.sent[m.arrived] != a->signal) {
            violated = true;
            r.fail("signal " + print_signal(a->signal) + " overtook an earlier one from #1 to #2");
            break;
          }
          ++next.arrived;
        }
        queue.push_back(std::move(next));
      }
    }
    both_arrived += complete_delivery;
  }
  r.note = std::to_string(both_arrived) + " scenarios delivered both signals; " +
           std::to_string(states) + " monitored states";
  r.seconds = since(t0);
  return r;
}

PropertyResult check_local_tau_confluence(const PropsConfig& cfg) {
  const auto t0 = Clock::now();
  PropertyResult r{"process-local tau confluence"};
  Generator gen(cfg.seed + 3);
  std::size_t attempts = 0;
  while (r.cases < cfg.cases && attempts < 100 * cfg.cases) {
    for (const auto& [pid, p] : sample_processes(gen, 8)) {
      ++attempts;
      auto p2 = local_apply(p, TauAction{});
      if (!p2) continue;
      for (const auto& a : probe_actions(gen, pid, p)) {
        if (is_tau(a)) continue;
        auto p2b = local_apply(p, a);
        if (!p2b) continue;
        ++r.cases;
        auto p3 = local_apply(*p2, a);
        if (!p3) {
          r.fail(print_action(a) + " is lost after the tau step of " + describe(p));
          continue;
        }
        auto back = local_apply(*p2b, TauAction{});
        if (!(back && *back == *p3) && *p2b != *p3) {
          r.fail("tau and " + print_action(a) + " do not commute on " + describe(p));
        }
      }
    }
  }
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- node level

namespace {

constexpr std::size_t kTauPathLimit = 6;
constexpr std::size_t kClosureLimit = 512;

std::vector<Node> tau_successors(const Node& n) {
  std::vector<Node> out;
  for (const auto& [pid, p] : n.pool) {
    if (auto next = node_step(n, pid, TauAction{})) out.push_back(std::move(*next));
  }
  return out;
}

/// Nodes reachable by tau steps with their distance, up to `depth` steps.
std::unordered_map<Node, std::size_t, NodeHash> tau_closure(const Node& n, std::size_t depth) {
  std::unordered_map<Node, std::size_t, NodeHash> dist{{n, 0}};
  std::vector<Node> layer{n};
  for (std::size_t d = 1; d <= depth && !layer.empty() && dist.size() < kClosureLimit; ++d) {
    std::vector<Node> next;
    for (const auto& x : layer) {
      for (auto& y : tau_successors(x)) {
        if (dist.emplace(y, d).second) next.push_back(std::move(y));
      }
    }
    layer = std::move(next);
  }
  return dist;
}

std::string edge_text(Pid pid, const Action& a) {
  return "#" + std::to_string(pid.id) + " " + print_action(a);
}

std::uint64_t pid_bit(Pid p) { return p.id < 64 ? std::uint64_t{1} << p.id : 0; }

struct NodeSuite {
  PropertyResult tau_confluence{"node tau confluence"};
  PropertyResult ordering{"action ordering"};
  PropertyResult chaining{"chaining to the end of a tau sequence"};
  PropertyResult confluence{"confluence of tau sequences"};

  void run(const Lts& lts);
};

void NodeSuite::run(const Lts& lts) {
  const auto& edges = lts.edges();
  for (std::size_t s1 = 0; s1 < lts.size(); ++s1) {
    if (lts.truncated(s1)) continue;
    const auto& out = lts.out(s1);

    for (std::size_t i : out) {
      const LtsEdge& e = edges[i];
      for (std::size_t j : out) {
        const LtsEdge& f = edges[j];
        // tau confluence for one process
        if (is_tau(e.action) && f.pid == e.pid && !is_tau(f.action)) {
          ++tau_confluence.cases;
          auto n3 = node_step(lts.state(e.to), f.pid, f.action);
          if (!n3) {
            tau_confluence.fail(edge_text(f.pid, f.action) + " is lost after the tau step");
          } else {
            auto back = node_step(lts.state(f.to), e.pid, TauAction{});
            if (!(back && *back == *n3) && lts.state(f.to) != *n3) {
              tau_confluence.fail("tau and " + edge_text(f.pid, f.action) + " do not commute");
            }
          }
        }
        // action ordering between distinct processes
        if (e.pid != f.pid && !(std::holds_alternative<SpawnAction>(e.action) &&
                                std::holds_alternative<SpawnAction>(f.action))) {
          ++ordering.cases;
          if (!node_step(lts.state(e.to), f.pid, f.action)) {
            ordering.fail(edge_text(f.pid, f.action) + " is disabled by " + edge_text(e.pid, e.action));
          }
        }
      }
    }

    // tau paths from s1, remembering which processes took a tau step
    std::vector<std::tuple<std::size_t, std::uint64_t, std::size_t>> paths{{s1, 0, 0}};
    std::unordered_set<std::size_t> visited_pairs;
    for (std::size_t at = 0; at < paths.size() && paths.size() < kClosureLimit; ++at) {
      auto [id, mask, len] = paths[at];
      if (len >= kTauPathLimit) continue;
      for (std::size_t i : lts.out(id)) {
        const LtsEdge& e = edges[i];
        if (!is_tau(e.action)) continue;
        const std::uint64_t m = mask | pid_bit(e.pid);
        std::size_t key = e.to * 1315423911u ^ m;
        if (!visited_pairs.insert(key).second) continue;
        paths.emplace_back(e.to, m, len + 1);
      }
    }
    std::unordered_map<std::size_t, std::size_t> shortest;
    for (auto [id, mask, len] : paths) {
      auto it = shortest.find(id);
      if (it == shortest.end() || it->second > len) shortest[id] = len;

      const Node& n4 = lts.state(id);
      for (std::size_t i : out) {
        const LtsEdge& e = edges[i];
        ++chaining.cases;
        if (node_step(n4, e.pid, e.action)) continue;
        if (is_tau(e.action) && (mask & pid_bit(e.pid))) continue;
        chaining.fail(edge_text(e.pid, e.action) + " cannot be chained after " +
                      std::to_string(len) + " tau steps");
      }
    }

    std::unordered_map<std::size_t, std::unordered_map<Node, std::size_t, NodeHash>> closures;
    for (auto [id, len] : shortest) {
      if (id == s1) continue;
      for (std::size_t i : out) {
        const LtsEdge& e = edges[i];
        auto n3 = node_step(lts.state(id), e.pid, e.action);
        if (!n3) continue;
        ++confluence.cases;
        auto& closure = closures.try_emplace(e.to, tau_closure(lts.state(e.to), kTauPathLimit + 1))
                            .first->second;
        auto hit = closure.find(*n3);
        if (hit == closure.end() || hit->second > len + 1) {
          confluence.fail("after " + edge_text(e.pid, e.action) + " the result of the same step " +
                          std::to_string(len) + " tau steps later is not tau-reachable");
        }
      }
    }
  }
}

}  // namespace

std::vector<PropertyResult> check_node_properties(const std::vector<Node>& nodes,
                                                  const ExplorationConfig& cfg) {
  const auto t0 = Clock::now();
  NodeSuite suite;
  std::size_t states = 0;
  for (const auto& n : nodes) {
    Lts lts = explore(n, cfg);
    states += lts.size();
    suite.run(lts);
  }
  std::vector<PropertyResult> out{suite.tau_confluence, suite.ordering, suite.chaining,
                                  suite.confluence};
  const double secs = since(t0);
  for (auto& r : out) {
    r.seconds = secs;
    r.note = std::to_string(nodes.size()) + " nodes, " + std::to_string(states) + " states";
  }
  return out;
}

std::vector<Node> property_nodes(const PropsConfig& cfg) {
  std::vector<Node> nodes{examples::signal_order_node(), examples::exit_kill_node(true),
                          examples::exit_kill_node(false), examples::let_kill_node()};
  Generator gen(cfg.seed + 4);
  for (std::size_t i = 0; i < cfg.random_nodes; ++i) nodes.push_back(gen.node());
  return nodes;
}

std::vector<PropertyResult> run_all_properties(const PropsConfig& cfg) {
  std::vector<PropertyResult> out{check_seq_determinism(cfg), check_local_determinism(cfg),
                                  check_exit_table(), check_signal_ordering(cfg),
                                  check_local_tau_confluence(cfg)};
  ExplorationConfig ex;
  ex.depth_bound = cfg.depth;
  ex.state_bound = 20000;
  for (auto& r : check_node_properties(property_nodes(cfg), ex)) out.push_back(std::move(r));
  return out;
}

}  // namespace cerl
