#include "cerl/node.hpp"

#include <algorithm>

#include "cerl/hash.hpp"

namespace cerl {

Ether Ether::push(Pid src, Pid dst, Signal s) const {
  Ether out = *this;
  out.queues_[{src, dst}].push_back(std::move(s));
  return out;
}

std::optional<std::pair<Signal, Ether>> Ether::pop_first(Pid src, Pid dst) const {
  auto it = queues_.find({src, dst});
  if (it == queues_.end()) return std::nullopt;
  Signal head = it->second.front();
  Ether out = *this;
  auto& q = out.queues_[{src, dst}];
  q.erase(q.begin());
  if (q.empty()) out.queues_.erase({src, dst});
  return std::pair{std::move(head), std::move(out)};
}

const std::vector<Signal>& Ether::queue(Pid src, Pid dst) const {
  static const std::vector<Signal> none;
  auto it = queues_.find({src, dst});
  return it == queues_.end() ? none : it->second;
}

std::size_t Ether::signal_count() const {
  std::size_t n = 0;
  for (const auto& [key, q] : queues_) n += q.size();
  return n;
}

std::size_t Ether::hash() const {
  std::size_t seed = queues_.size();
  for (const auto& [key, q] : queues_) {
    hash_mix(seed, key.first);
    hash_mix(seed, key.second);
    hash_mix(seed, q.size());
    for (const auto& s : q) hash_combine(seed, hash_signal(s));
  }
  return seed;
}

std::size_t hash_node(const Node& n) {
  std::size_t seed = n.ether.hash();
  for (const auto& [pid, p] : n.pool) {
    hash_mix(seed, pid);
    hash_combine(seed, hash_process(p));
  }
  return seed;
}

Pid fresh_pid(const Node& n) {
  std::uint64_t top = 0;
  auto see = [&](Pid p) { top = std::max(top, p.id); };
  for (const auto& [pid, p] : n.pool) {
    see(pid);
    if (const auto* live = std::get_if<LiveProcess>(&p)) {
      for (Pid l : live->links) see(l);
    } else {
      for (const auto& ob : std::get<DeadProcess>(p).obligations) see(ob.first);
    }
  }
  for (const auto& [key, q] : n.ether.queues()) {
    see(key.first);
    see(key.second);
  }
  return Pid{top + 1};
}

namespace {

bool is_finished_dead(const Process& p) {
  const auto* dead = std::get_if<DeadProcess>(&p);
  return dead != nullptr && dead->obligations.empty();
}

Node with_process(const Node& n, Pid pid, Process p) {
  Node out = n;
  out.pool.insert_or_assign(pid, std::move(p));
  return out;
}

std::optional<Node> spawn_step(const Node& n, Pid pid, const Process& p, const SpawnAction& a) {
  if (n.pool.contains(a.pid)) return std::nullopt;
  const auto* fn = a.fn.get_if<Fun>();
  if (fn == nullptr) return std::nullopt;
  auto args = list_to_meta(a.args);
  if (!args || args->size() != fn->id.arity) return std::nullopt;
  auto parent = local_apply(p, a);
  if (!parent) return std::nullopt;
  std::vector<Expr> arg_exprs;
  arg_exprs.reserve(args->size());
  for (const auto& v : *args) arg_exprs.push_back(val(v));
  Node out = with_process(n, pid, std::move(*parent));
  out.pool.emplace(a.pid, make_process(apply(val(a.fn), std::move(arg_exprs))));
  return out;
}

}  // namespace

std::optional<Node> node_step(const Node& n, Pid pid, const Action& a) {
  auto it = n.pool.find(pid);
  if (it == n.pool.end()) return std::nullopt;
  const Process& p = it->second;

  if (const auto* s = std::get_if<SendAction>(&a)) {
    if (s->src != pid) return std::nullopt;
    auto next = local_apply(p, a);
    if (!next) return std::nullopt;
    Node out = with_process(n, pid, std::move(*next));
    out.ether = n.ether.push(s->src, s->dst, s->signal);
    return out;
  }
  if (const auto* arr = std::get_if<ArriveAction>(&a)) {
    if (arr->dst != pid) return std::nullopt;
    auto popped = n.ether.pop_first(arr->src, arr->dst);
    if (!popped || popped->first != arr->signal) return std::nullopt;
    auto next = local_apply(p, a);
    if (!next) return std::nullopt;
    Node out = with_process(n, pid, std::move(*next));
    out.ether = std::move(popped->second);
    return out;
  }
  if (std::holds_alternative<TerminateAction>(a) && is_finished_dead(p)) {
    Node out = n;
    out.pool.erase(pid);
    return out;
  }
  if (const auto* sp = std::get_if<SpawnAction>(&a)) return spawn_step(n, pid, p, *sp);
  if (const auto* self = std::get_if<SelfAction>(&a)) {
    if (self->pid != pid) return std::nullopt;
  }
  auto next = local_apply(p, a);
  if (!next) return std::nullopt;
  return with_process(n, pid, std::move(*next));
}

std::vector<Transition> node_successors(const Node& n) {
  std::vector<Transition> out;
  const Pid spawn_pid = fresh_pid(n);
  for (const auto& [pid, p] : n.pool) {
    if (is_finished_dead(p)) {
      Node next = n;
      next.pool.erase(pid);
      out.push_back({pid, TerminateAction{}, std::move(next)});
      continue;
    }
    for (auto& a : local_enabled(p, pid, spawn_pid)) {
      if (auto next = node_step(n, pid, a)) out.push_back({pid, std::move(a), std::move(*next)});
    }
    if (!std::holds_alternative<LiveProcess>(p)) continue;
    for (const auto& [key, q] : n.ether.queues()) {
      if (key.second != pid) continue;
      Action a = ArriveAction{key.first, key.second, q.front()};
      if (auto next = node_step(n, pid, a)) out.push_back({pid, std::move(a), std::move(*next)});
    }
  }
  return out;
}

std::vector<std::pair<Pid, Action>> node_enabled(const Node& n) {
  std::vector<std::pair<Pid, Action>> out;
  for (auto& t : node_successors(n)) out.emplace_back(t.pid, std::move(t.action));
  return out;
}

Node make_node(const std::vector<std::pair<Pid, Expr>>& programs) {
  Node n;
  for (const auto& [pid, e] : programs) n.pool.insert_or_assign(pid, make_process(e));
  return n;
}

}  // namespace cerl
