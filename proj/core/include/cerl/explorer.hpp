#pragma once

// Trace replay, bounded breadth-first exploration into a labelled transition
// system, and seeded random runs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cerl/node.hpp"

namespace cerl {

struct TraceStep {
  Pid pid;
  Action action;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

using Trace = std::vector<TraceStep>;

struct Replay {
  /// The last node reached: the final node on success, otherwise the node at
  /// which step `failed_at` was not enabled.
  Node node;
  std::optional<std::size_t> failed_at;
  bool ok() const { return !failed_at.has_value(); }
};

Replay run_trace(const Node& start, const Trace& trace);

struct ExplorationConfig {
  std::size_t depth_bound = 256;
  std::size_t state_bound = 100000;
  /// Follow only sequential (tau) steps.
  bool tau_only = false;
};

struct LtsEdge {
  std::size_t from;
  Pid pid;
  Action action;
  std::size_t to;
};

class Lts {
 public:
  static constexpr std::size_t initial = 0;

  std::size_t size() const { return states_.size(); }
  const Node& state(std::size_t id) const { return states_[id]; }
  const std::vector<Node>& states() const { return states_; }
  /// Shortest distance from the initial state.
  std::size_t depth(std::size_t id) const { return depth_[id]; }

  const std::vector<LtsEdge>& edges() const { return edges_; }
  /// Indices into edges() leaving `id`.
  const std::vector<std::size_t>& out(std::size_t id) const { return out_[id]; }

  /// A state whose outgoing edges may be incomplete because a bound was hit.
  bool truncated(std::size_t id) const { return truncated_[id]; }
  bool complete() const;
  std::vector<std::size_t> truncated_states() const;
  /// States with no outgoing edges that are not truncated.
  std::vector<std::size_t> terminal_states() const;

  std::optional<std::size_t> find(const Node& n) const;

  /// A shortest path from the initial state.
  Trace trace_to(std::size_t id) const;

 private:
  friend Lts explore(const Node& start, const ExplorationConfig& cfg);

  std::size_t add_state(Node n, std::size_t depth, std::optional<std::size_t> parent_edge);

  std::vector<Node> states_;
  std::vector<std::size_t> depth_;
  std::vector<bool> truncated_;
  std::vector<std::optional<std::size_t>> parent_edge_;
  std::vector<LtsEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash_;
};

Lts explore(const Node& start, const ExplorationConfig& cfg);

/// For each pid, the distinct values its process finished evaluating to in
/// some explored state (empty stack and a value redex), in discovery order.
/// A finished process only has its terminate step left, after which it
/// leaves the pool, so these are read from every state, not only from the
/// states without moves.
std::map<Pid, std::vector<Value>> final_values(const Lts& lts);

struct RandomRun {
  Node node;
  Trace trace;
};

/// Picks uniformly among the enabled steps until none is left or `max_steps`
/// steps were taken.
RandomRun random_run(const Node& start, std::uint64_t seed, std::size_t max_steps);

}  // namespace cerl
