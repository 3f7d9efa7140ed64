#include "cerl/explorer.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace cerl {

Replay run_trace(const Node& start, const Trace& trace) {
  Node current = start;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto next = node_step(current, trace[i].pid, trace[i].action);
    if (!next) return {std::move(current), i};
    current = std::move(*next);
  }
  return {std::move(current), std::nullopt};
}

bool Lts::complete() const {
  return std::none_of(truncated_.begin(), truncated_.end(), [](bool t) { return t; });
}

std::vector<std::size_t> Lts::truncated_states() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (truncated_[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Lts::terminal_states() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!truncated_[i] && out_[i].empty()) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> Lts::find(const Node& n) const {
  auto it = by_hash_.find(hash_node(n));
  if (it == by_hash_.end()) return std::nullopt;
  for (std::size_t id : it->second) {
    if (states_[id] == n) return id;
  }
  return std::nullopt;
}

Trace Lts::trace_to(std::size_t id) const {
  Trace out;
  while (auto e = parent_edge_[id]) {
    const LtsEdge& edge = edges_[*e];
    out.push_back({edge.pid, edge.action});
    id = edge.from;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t Lts::add_state(Node n, std::size_t depth, std::optional<std::size_t> parent_edge) {
  const std::size_t id = states_.size();
  by_hash_[hash_node(n)].push_back(id);
  states_.push_back(std::move(n));
  depth_.push_back(depth);
  truncated_.push_back(false);
  parent_edge_.push_back(parent_edge);
  out_.emplace_back();
  return id;
}

Lts explore(const Node& start, const ExplorationConfig& cfg) {
  Lts lts;
  lts.add_state(start, 0, std::nullopt);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    auto successors = node_successors(lts.states_[id]);
    if (cfg.tau_only) {
      std::erase_if(successors, [](const Transition& t) { return !is_tau(t.action); });
    }
    if (successors.empty()) continue;
    if (lts.depth_[id] >= cfg.depth_bound) {
      lts.truncated_[id] = true;
      continue;
    }
    for (auto& t : successors) {
      auto target = lts.find(t.target);
      if (!target) {
        if (lts.size() >= cfg.state_bound) {
          lts.truncated_[id] = true;
          continue;
        }
        target = lts.add_state(std::move(t.target), lts.depth_[id] + 1, lts.edges_.size());
        queue.push_back(*target);
      }
      lts.out_[id].push_back(lts.edges_.size());
      lts.edges_.push_back({id, t.pid, std::move(t.action), *target});
    }
  }
  return lts;
}

RandomRun random_run(const Node& start, std::uint64_t seed, std::size_t max_steps) {
  std::mt19937_64 rng(seed);
  RandomRun run{start, {}};
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto successors = node_successors(run.node);
    if (successors.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, successors.size() - 1);
    Transition& t = successors[pick(rng)];
    run.trace.push_back({t.pid, t.action});
    run.node = std::move(t.target);
  }
  return run;
}

std::map<Pid, std::vector<Value>> final_values(const Lts& lts) {
  std::map<Pid, std::vector<Value>> out;
  for (const auto& n : lts.states()) {
    for (const auto& [pid, p] : n.pool) {
      const auto* live = std::get_if<LiveProcess>(&p);
      if (live == nullptr || !live->stack.empty() || live->redex.as_value() == nullptr) continue;
      auto& seen = out[pid];
      if (std::find(seen.begin(), seen.end(), *live->redex.as_value()) == seen.end()) {
        seen.push_back(*live->redex.as_value());
      }
    }
  }
  return out;
}

}  // namespace cerl
