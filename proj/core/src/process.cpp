#include "cerl/process.hpp"

#include <algorithm>

#include "cerl/hash.hpp"

namespace cerl {

std::size_t hash_signal(const Signal& s) {
  std::size_t seed = s.index() + 0x51ed27;
  if (const auto* m = std::get_if<Message>(&s)) {
    hash_combine(seed, m->value.hash());
  } else if (const auto* e = std::get_if<ExitSignal>(&s)) {
    hash_combine(seed, e->reason.hash());
    hash_mix(seed, e->link);
  }
  return seed;
}

std::size_t hash_action(const Action& a) {
  std::size_t seed = a.index() + 0xac7;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SendAction> || std::is_same_v<T, ArriveAction>) {
          hash_mix(seed, x.src);
          hash_mix(seed, x.dst);
          hash_combine(seed, hash_signal(x.signal));
        } else if constexpr (std::is_same_v<T, ReceiveAction>) {
          hash_combine(seed, x.value.hash());
        } else if constexpr (std::is_same_v<T, SelfAction>) {
          hash_mix(seed, x.pid);
        } else if constexpr (std::is_same_v<T, SpawnAction>) {
          hash_mix(seed, x.pid);
          hash_combine(seed, x.fn.hash());
          hash_combine(seed, x.args.hash());
        }
      },
      a);
  return seed;
}

std::size_t hash_process(const Process& p) {
  std::size_t seed = p.index() + 0x9a3;
  if (const auto* live = std::get_if<LiveProcess>(&p)) {
    hash_combine(seed, live->stack.hash());
    hash_combine(seed, live->redex.hash());
    hash_mix(seed, live->mailbox.size());
    for (const auto& v : live->mailbox) hash_combine(seed, v.hash());
    hash_mix(seed, live->links.size());
    for (const auto& l : live->links) hash_mix(seed, l);
    hash_mix(seed, live->trap_exit);
  } else {
    for (const auto& [pid, reason] : std::get<DeadProcess>(p).obligations) {
      hash_mix(seed, pid);
      hash_combine(seed, reason.hash());
    }
  }
  return seed;
}

Process make_process(Expr e) { return LiveProcess{FrameStack{}, std::move(e), {}, {}, false}; }

std::vector<Pid> remove_all(const std::vector<Pid>& xs, Pid x) {
  std::vector<Pid> out;
  std::copy_if(xs.begin(), xs.end(), std::back_inserter(out), [&](Pid y) { return y != x; });
  return out;
}

// ---------------------------------------------------------------- exits

ExitOutcome exit_decision(bool trap, const Value& reason, bool link_flag, Pid src, Pid self,
                          const std::vector<Pid>& links) {
  const bool normal = reason.is_atom("normal");
  const bool kill = reason.is_atom("kill");
  const bool linked = std::find(links.begin(), links.end(), src) != links.end();
  const bool from_self = src == self;

  // An explicit 'kill' terminates even a trapping process. It takes
  // precedence over the generic termination case below.
  if (kill && !link_flag) return TerminateWith{Value::atom("killed")};
  if ((!from_self && !trap && normal) || (!linked && link_flag && !from_self)) return DropSignal{};
  if (!trap && !normal && (!link_flag || linked)) return TerminateWith{reason};
  if (!trap && normal && from_self) return TerminateWith{reason};
  if (trap && ((!link_flag && !kill) || (link_flag && linked))) return ConvertToMessage{};
  return NoRule{};
}

Value exit_message(Pid src, const Value& reason) {
  const Value items[] = {Value::atom("EXIT"), Value::pid(src), reason};
  return Value::list(items);
}

std::optional<ReceiveChoice> receive_select(const Mailbox& q, const std::vector<Clause>& clauses) {
  for (std::size_t pos = 0; pos < q.size(); ++pos) {
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      if (auto b = match_bind(clauses[i].pattern, q[pos])) {
        return ReceiveChoice{i, pos, q[pos], std::move(*b)};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- steps

namespace {

DeadProcess terminate(const std::vector<Pid>& links, const Value& reason) {
  DeadProcess d;
  for (Pid l : links) d.obligations.emplace_back(l, reason);
  return d;
}

LiveProcess continue_with(const LiveProcess& p, const FrameStack& k, Value v) {
  LiveProcess next = p;
  next.stack = k;
  next.redex = val(std::move(v));
  return next;
}

std::optional<Process> arrive(const LiveProcess& p, const ArriveAction& a) {
  LiveProcess next = p;
  if (const auto* m = std::get_if<Message>(&a.signal)) {
    next.mailbox.push_back(m->value);
    return next;
  }
  if (const auto* e = std::get_if<ExitSignal>(&a.signal)) {
    ExitOutcome out = exit_decision(p.trap_exit, e->reason, e->link, a.src, a.dst, p.links);
    if (std::holds_alternative<DropSignal>(out)) return next;
    if (const auto* t = std::get_if<TerminateWith>(&out)) return terminate(p.links, t->reason);
    if (std::holds_alternative<ConvertToMessage>(out)) {
      next.mailbox.push_back(exit_message(a.src, e->reason));
      return next;
    }
    return std::nullopt;
  }
  if (std::holds_alternative<LinkSignal>(a.signal)) {
    next.links.insert(next.links.begin(), a.src);
    return next;
  }
  next.links = remove_all(p.links, a.src);
  return next;
}

std::optional<Process> send(const LiveProcess& p, const ConcDispatch& d, const SendAction& a) {
  const Signal& s = a.signal;
  if (const auto* x = std::get_if<SendShape>(&d.shape)) {
    if (x->target != a.dst || s != Signal{Message{x->payload}}) return std::nullopt;
    return continue_with(p, d.rest, x->payload);
  }
  if (const auto* x = std::get_if<Exit2Shape>(&d.shape)) {
    if (x->target != a.dst || s != Signal{ExitSignal{x->reason, false}}) return std::nullopt;
    return continue_with(p, d.rest, Value::atom("true"));
  }
  if (const auto* x = std::get_if<LinkShape>(&d.shape)) {
    if (x->target != a.dst || !std::holds_alternative<LinkSignal>(s)) return std::nullopt;
    LiveProcess next = continue_with(p, d.rest, Value::atom("ok"));
    next.links.insert(next.links.begin(), x->target);
    return next;
  }
  if (const auto* x = std::get_if<UnlinkShape>(&d.shape)) {
    if (x->target != a.dst || !std::holds_alternative<UnlinkSignal>(s)) return std::nullopt;
    LiveProcess next = continue_with(p, d.rest, Value::atom("ok"));
    next.links = remove_all(p.links, x->target);
    return next;
  }
  return std::nullopt;
}

std::optional<Process> live_apply(const LiveProcess& p, const Action& a) {
  if (is_tau(a)) {
    auto s = seq_step(p.stack, p.redex);
    if (!s) return std::nullopt;
    LiveProcess next = p;
    next.stack = std::move(s->first);
    next.redex = std::move(s->second);
    return next;
  }
  if (const auto* arr = std::get_if<ArriveAction>(&a)) return arrive(p, *arr);

  RedexClass cls = classify_redex(p.stack, p.redex);

  if (const auto* r = std::get_if<ReceiveAction>(&a)) {
    const auto* rec = p.redex.get_if<Receive>();
    if (!std::holds_alternative<ReceiveRedex>(cls) || rec == nullptr) return std::nullopt;
    auto choice = receive_select(p.mailbox, rec->clauses);
    if (!choice || choice->message != r->value) return std::nullopt;
    LiveProcess next = p;
    next.redex = subst(rec->clauses[choice->clause].body, choice->bindings);
    next.mailbox.erase(next.mailbox.begin() + static_cast<std::ptrdiff_t>(choice->position));
    return next;
  }
  if (std::holds_alternative<TerminateAction>(a)) {
    if (std::holds_alternative<FinalValue>(cls)) return terminate(p.links, Value::atom("normal"));
    if (const auto* d = std::get_if<ConcDispatch>(&cls)) {
      if (const auto* x = std::get_if<Exit1Shape>(&d->shape)) return terminate(p.links, x->reason);
    }
    return std::nullopt;
  }

  const auto* d = std::get_if<ConcDispatch>(&cls);
  if (d == nullptr) return std::nullopt;
  if (const auto* s = std::get_if<SendAction>(&a)) return send(p, *d, *s);
  if (const auto* s = std::get_if<SelfAction>(&a)) {
    if (!std::holds_alternative<SelfShape>(d->shape)) return std::nullopt;
    return continue_with(p, d->rest, Value::pid(s->pid));
  }
  if (const auto* s = std::get_if<SpawnAction>(&a)) {
    const auto* x = std::get_if<SpawnShape>(&d->shape);
    if (x == nullptr || x->fn != s->fn || x->args != s->args) return std::nullopt;
    return continue_with(p, d->rest, Value::pid(s->pid));
  }
  if (std::holds_alternative<FlagAction>(a)) {
    const auto* x = std::get_if<FlagShape>(&d->shape);
    if (x == nullptr) return std::nullopt;
    auto flag = atom_to_bool(x->value);
    if (!flag) return std::nullopt;
    LiveProcess next = continue_with(p, d->rest, bool_to_atom(p.trap_exit));
    next.trap_exit = *flag;
    return next;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Process> local_apply(const Process& p, const Action& a) {
  if (const auto* live = std::get_if<LiveProcess>(&p)) return live_apply(*live, a);
  const auto& dead = std::get<DeadProcess>(p);
  const auto* s = std::get_if<SendAction>(&a);
  if (s == nullptr || dead.obligations.empty()) return std::nullopt;
  const auto& [target, reason] = dead.obligations.front();
  if (s->dst != target || s->signal != Signal{ExitSignal{reason, true}}) return std::nullopt;
  return DeadProcess{{dead.obligations.begin() + 1, dead.obligations.end()}};
}

std::vector<Action> local_enabled(const Process& p, Pid self, Pid spawn_pid) {
  if (const auto* dead = std::get_if<DeadProcess>(&p)) {
    if (dead->obligations.empty()) return {};
    const auto& [target, reason] = dead->obligations.front();
    return {SendAction{self, target, ExitSignal{reason, true}}};
  }
  const auto& live = std::get<LiveProcess>(p);
  RedexClass cls = classify_redex(live.stack, live.redex);
  return std::visit(
      [&](const auto& c) -> std::vector<Action> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TauRedex>) {
          return {TauAction{}};
        } else if constexpr (std::is_same_v<T, FinalValue>) {
          return {TerminateAction{}};
        } else if constexpr (std::is_same_v<T, ReceiveRedex>) {
          auto choice = receive_select(live.mailbox, live.redex.template get_if<Receive>()->clauses);
          if (!choice) return {};
          return {ReceiveAction{choice->message}};
        } else if constexpr (std::is_same_v<T, ConcDispatch>) {
          return std::visit(
              [&](const auto& s) -> std::vector<Action> {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, SendShape>) {
                  return {SendAction{self, s.target, Message{s.payload}}};
                } else if constexpr (std::is_same_v<S, Exit2Shape>) {
                  return {SendAction{self, s.target, ExitSignal{s.reason, false}}};
                } else if constexpr (std::is_same_v<S, Exit1Shape>) {
                  return {TerminateAction{}};
                } else if constexpr (std::is_same_v<S, LinkShape>) {
                  return {SendAction{self, s.target, LinkSignal{}}};
                } else if constexpr (std::is_same_v<S, UnlinkShape>) {
                  return {SendAction{self, s.target, UnlinkSignal{}}};
                } else if constexpr (std::is_same_v<S, SelfShape>) {
                  return {SelfAction{self}};
                } else if constexpr (std::is_same_v<S, SpawnShape>) {
                  return {SpawnAction{spawn_pid, s.fn, s.args}};
                } else {
                  return {FlagAction{}};
                }
              },
              c.shape);
        } else {
          return {};
        }
      },
      cls);
}

}  // namespace cerl
