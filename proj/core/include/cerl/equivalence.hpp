#pragma once

// Strong and weak bisimulation over explored transition systems.

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cerl/explorer.hpp"

namespace cerl {

/// An explicit finite set of node pairs.
class NodeRelation {
 public:
  /// Returns false when the pair was already present.
  bool add(const Node& left, const Node& right);
  bool contains(const Node& left, const Node& right) const;
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<Node, Node>>& pairs() const { return pairs_; }

  /// {(s, s)} for every state of `lts`.
  static NodeRelation identity(const Lts& lts);
  /// {(s, t)} where t is reachable from s by tau steps inside `lts`.
  static NodeRelation tau_reachability(const Lts& lts);
  /// {(s, t)} for states s of `from` whose replay of `trace` ends in a state
  /// t of `to`.
  static NodeRelation along_trace(const Lts& from, const Lts& to, const Trace& trace);
  /// Pairs of state ids mapped back to nodes.
  static NodeRelation from_ids(const Lts& left, const Lts& right,
                               const std::vector<std::pair<std::size_t, std::size_t>>& ids);

 private:
  static std::size_t key(const Node& left, const Node& right);
  std::vector<std::pair<Node, Node>> pairs_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index_;
};

enum class Verdict { Holds, FailsAt, UnknownAtBound };

const char* verdict_name(Verdict v);

using StatePair = std::pair<std::size_t, std::size_t>;

/// A move of one side that the other side cannot answer.
struct UnmatchedMove {
  StatePair pair;      // state ids in the left and right systems
  bool left_moves;     // true when the move belongs to the left node
  Pid pid;
  Action action;
  std::size_t target;  // successor of the moving side
  std::string reason;
};

struct BisimReport {
  Verdict verdict = Verdict::UnknownAtBound;
  std::optional<UnmatchedMove> failure;
  /// Pairs whose check depended on a truncated state.
  std::vector<StatePair> unknown;
  /// For Holds from weakly_bisimilar: a weak bisimulation containing the
  /// initial pair, as state id pairs.
  std::vector<StatePair> witness;
};

/// Every move of either side is answered by the same (pid, action) with
/// successors related again.
BisimReport check_bisimulation(const NodeRelation& r, const Lts& left, const Lts& right);

/// Every non-tau move of either side is answered by tau* (pid, action) tau*
/// with successors related again. Tau moves need no answer.
BisimReport check_weak_bisimulation(const NodeRelation& r, const Lts& left, const Lts& right);

/// Nodes reachable by at most `bound` tau steps.
std::vector<Node> tau_reach(const Node& n, std::size_t bound);

struct WeakResult {
  BisimReport report;
  Lts left;
  Lts right;
};

/// Largest weak bisimulation between the bounded explorations of both nodes,
/// and whether it relates them.
WeakResult weakly_bisimilar(const Node& a, const Node& b, const ExplorationConfig& cfg);

}  // namespace cerl
