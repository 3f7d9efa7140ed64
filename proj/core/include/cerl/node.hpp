#pragma once

// Inter-process semantics: the ether, the process pool, nodes and the
// labelled node relation.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cerl/process.hpp"

namespace cerl {

/// Signals in transit, one FIFO queue per (source, destination) pair.
/// Empty queues are never stored, so equal ethers compare equal.
class Ether {
 public:
  using Key = std::pair<Pid, Pid>;
  using Queues = std::map<Key, std::vector<Signal>>;

  Ether() = default;

  Ether push(Pid src, Pid dst, Signal s) const;
  /// Head of the (src, dst) queue and the remaining ether.
  std::optional<std::pair<Signal, Ether>> pop_first(Pid src, Pid dst) const;

  /// Empty when nothing is queued.
  const std::vector<Signal>& queue(Pid src, Pid dst) const;
  const Queues& queues() const { return queues_; }
  bool empty() const { return queues_.empty(); }
  std::size_t signal_count() const;

  std::size_t hash() const;
  friend bool operator==(const Ether&, const Ether&) = default;

 private:
  Queues queues_;
};

inline Ether ether_push(const Ether& d, Pid src, Pid dst, Signal s) {
  return d.push(src, dst, std::move(s));
}
inline std::optional<std::pair<Signal, Ether>> ether_pop_first(const Ether& d, Pid src, Pid dst) {
  return d.pop_first(src, dst);
}

using ProcessPool = std::map<Pid, Process>;

struct Node {
  Ether ether;
  ProcessPool pool;
  friend bool operator==(const Node&, const Node&) = default;
};

std::size_t hash_node(const Node& n);

struct NodeHash {
  std::size_t operator()(const Node& n) const { return hash_node(n); }
};

/// One past the largest pid used as a pool key, an ether endpoint, a link or
/// a pending exit target.
Pid fresh_pid(const Node& n);

/// One node step by process `pid`, or nullopt when the step is not enabled.
std::optional<Node> node_step(const Node& n, Pid pid, const Action& a);

struct Transition {
  Pid pid;
  Action action;
  Node target;
};

/// Every enabled step together with its successor, ordered by pid. Spawns use
/// fresh_pid(n).
std::vector<Transition> node_successors(const Node& n);

std::vector<std::pair<Pid, Action>> node_enabled(const Node& n);

/// Builds a node whose processes are fresh processes evaluating the given
/// expressions.
Node make_node(const std::vector<std::pair<Pid, Expr>>& programs);

}  // namespace cerl
