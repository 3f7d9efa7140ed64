#include "cerl/equivalence.hpp"

#include <algorithm>
#include <deque>

#include "cerl/hash.hpp"

namespace cerl {

// ---------------------------------------------------------------- relation

std::size_t NodeRelation::key(const Node& left, const Node& right) {
  std::size_t seed = hash_node(left);
  hash_combine(seed, hash_node(right));
  return seed;
}

bool NodeRelation::add(const Node& left, const Node& right) {
  if (contains(left, right)) return false;
  index_[key(left, right)].push_back(pairs_.size());
  pairs_.emplace_back(left, right);
  return true;
}

bool NodeRelation::contains(const Node& left, const Node& right) const {
  auto it = index_.find(key(left, right));
  if (it == index_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [&](std::size_t i) {
    return pairs_[i].first == left && pairs_[i].second == right;
  });
}

NodeRelation NodeRelation::identity(const Lts& lts) {
  NodeRelation r;
  for (const auto& s : lts.states()) r.add(s, s);
  return r;
}

namespace {

std::vector<std::size_t> tau_closure(const Lts& lts, std::size_t from) {
  std::vector<std::size_t> seen{from};
  std::vector<bool> mark(lts.size(), false);
  mark[from] = true;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t e : lts.out(seen[i])) {
      const LtsEdge& edge = lts.edges()[e];
      if (is_tau(edge.action) && !mark[edge.to]) {
        mark[edge.to] = true;
        seen.push_back(edge.to);
      }
    }
  }
  return seen;
}

}  // namespace

NodeRelation NodeRelation::tau_reachability(const Lts& lts) {
  NodeRelation r;
  for (std::size_t s = 0; s < lts.size(); ++s) {
    for (std::size_t t : tau_closure(lts, s)) r.add(lts.state(s), lts.state(t));
  }
  return r;
}

NodeRelation NodeRelation::along_trace(const Lts& from, const Lts& to, const Trace& trace) {
  NodeRelation r;
  for (const auto& s : from.states()) {
    Replay replay = run_trace(s, trace);
    if (replay.ok() && to.find(replay.node)) r.add(s, replay.node);
  }
  return r;
}

NodeRelation NodeRelation::from_ids(const Lts& left, const Lts& right,
                                    const std::vector<StatePair>& ids) {
  NodeRelation r;
  for (const auto& [i, j] : ids) r.add(left.state(i), right.state(j));
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "Holds";
    case Verdict::FailsAt:
      return "FailsAt";
    case Verdict::UnknownAtBound:
      return "UnknownAtBound";
  }
  return "?";
}

// ---------------------------------------------------------------- move tables

namespace {

/// Interns (pid, action) labels so moves can be compared by integer.
class Labels {
 public:
  std::size_t id(Pid pid, const Action& a) {
    std::size_t h = hash_action(a);
    hash_mix(h, pid);
    auto& bucket = index_[h];
    for (std::size_t i : bucket) {
      if (labels_[i].first == pid && labels_[i].second == a) return i;
    }
    bucket.push_back(labels_.size());
    labels_.emplace_back(pid, a);
    return labels_.size() - 1;
  }

 private:
  std::vector<std::pair<Pid, Action>> labels_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index_;
};

struct Move {
  std::size_t label;
  std::size_t target;
  std::size_t edge;
};

/// Strong and weak moves of every state of one system.
struct MoveTable {
  std::vector<std::vector<Move>> strong;       // all edges, tau included
  std::vector<std::vector<Move>> visible;      // non-tau edges
  std::vector<std::vector<Move>> weak;         // tau* a tau*, a non-tau; sorted by label
  std::vector<bool> weak_uncertain;            // a truncated state was involved

  /// Targets of weak moves of `state` with `label`.
  std::pair<std::vector<Move>::const_iterator, std::vector<Move>::const_iterator> weak_with(
      std::size_t state, std::size_t label) const {
    const auto& w = weak[state];
    auto lo = std::lower_bound(w.begin(), w.end(), label,
                               [](const Move& m, std::size_t l) { return m.label < l; });
    auto hi = std::upper_bound(w.begin(), w.end(), label,
                               [](std::size_t l, const Move& m) { return l < m.label; });
    return {lo, hi};
  }
};

MoveTable build_moves(const Lts& lts, Labels& labels) {
  MoveTable t;
  const std::size_t n = lts.size();
  t.strong.resize(n);
  t.visible.resize(n);
  t.weak.resize(n);
  t.weak_uncertain.assign(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e : lts.out(s)) {
      const LtsEdge& edge = lts.edges()[e];
      Move m{labels.id(edge.pid, edge.action), edge.to, e};
      t.strong[s].push_back(m);
      if (!is_tau(edge.action)) t.visible[s].push_back(m);
    }
  }
  std::vector<std::vector<std::size_t>> closure(n);
  std::vector<bool> closure_truncated(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    closure[s] = tau_closure(lts, s);
    closure_truncated[s] = std::any_of(closure[s].begin(), closure[s].end(),
                                       [&](std::size_t u) { return lts.truncated(u); });
  }
  for (std::size_t s = 0; s < n; ++s) {
    bool uncertain = closure_truncated[s];
    auto& w = t.weak[s];
    for (std::size_t u : closure[s]) {
      for (const Move& m : t.visible[u]) {
        uncertain = uncertain || closure_truncated[m.target];
        for (std::size_t v : closure[m.target]) w.push_back({m.label, v, m.edge});
      }
    }
    std::sort(w.begin(), w.end(), [](const Move& a, const Move& b) {
      return a.label != b.label ? a.label < b.label : a.target < b.target;
    });
    w.erase(std::unique(w.begin(), w.end(),
                        [](const Move& a, const Move& b) {
                          return a.label == b.label && a.target == b.target;
                        }),
            w.end());
    t.weak_uncertain[s] = uncertain;
  }
  return t;
}

UnmatchedMove unmatched(const Lts& moving, StatePair pair, bool left_moves, const Move& m,
                        std::string reason) {
  const LtsEdge& edge = moving.edges()[m.edge];
  return {pair, left_moves, edge.pid, edge.action, m.target, std::move(reason)};
}

BisimReport conclude(std::optional<UnmatchedMove> failure, std::vector<StatePair> unknown) {
  BisimReport report;
  if (failure) {
    report.verdict = Verdict::FailsAt;
    report.failure = std::move(failure);
  } else if (!unknown.empty()) {
    report.verdict = Verdict::UnknownAtBound;
  } else {
    report.verdict = Verdict::Holds;
  }
  report.unknown = std::move(unknown);
  return report;
}

}  // namespace

// ---------------------------------------------------------------- relation checks

namespace {

template <class Answers>
BisimReport check_relation(const NodeRelation& r, const Lts& left, const Lts& right, bool weak,
                           Answers answers) {
  Labels labels;
  MoveTable lm = build_moves(left, labels);
  MoveTable rm = build_moves(right, labels);
  std::optional<UnmatchedMove> failure;
  std::vector<StatePair> unknown;

  for (const auto& [n1, n2] : r.pairs()) {
    auto i = left.find(n1);
    auto j = right.find(n2);
    if (!i || !j) {
      unknown.emplace_back(i.value_or(SIZE_MAX), j.value_or(SIZE_MAX));
      continue;
    }
    bool uncertain = left.truncated(*i) || right.truncated(*j);
    auto side = [&](const Lts& mover, const MoveTable& mt, std::size_t s, const Lts& other,
                    const MoveTable& ot, std::size_t o, bool left_moves) {
      const auto& moves = weak ? mt.visible[s] : mt.strong[s];
      for (const Move& m : moves) {
        if (answers(mover, other, ot, o, m, left_moves)) continue;
        const bool other_uncertain = weak ? ot.weak_uncertain[o] : other.truncated(o);
        if (other_uncertain) {
          uncertain = true;
        } else if (!failure) {
          failure = unmatched(mover, {*i, *j}, left_moves, m,
                              weak ? "no tau* a tau* answer reaches a related pair"
                                   : "no equal step reaches a related pair");
        }
      }
    };
    side(left, lm, *i, right, rm, *j, true);
    side(right, rm, *j, left, lm, *i, false);
    if (uncertain) unknown.emplace_back(*i, *j);
  }
  return conclude(std::move(failure), std::move(unknown));
}

}  // namespace

BisimReport check_bisimulation(const NodeRelation& r, const Lts& left, const Lts& right) {
  return check_relation(r, left, right, false,
                        [&](const Lts& mover, const Lts& other, const MoveTable& ot, std::size_t o,
                            const Move& m, bool left_moves) {
                          for (const Move& k : ot.strong[o]) {
                            if (k.label != m.label) continue;
                            const Node& a = mover.state(m.target);
                            const Node& b = other.state(k.target);
                            if (left_moves ? r.contains(a, b) : r.contains(b, a)) return true;
                          }
                          return false;
                        });
}

BisimReport check_weak_bisimulation(const NodeRelation& r, const Lts& left, const Lts& right) {
  return check_relation(r, left, right, true,
                        [&](const Lts& mover, const Lts& other, const MoveTable& ot, std::size_t o,
                            const Move& m, bool left_moves) {
                          auto [lo, hi] = ot.weak_with(o, m.label);
                          for (auto it = lo; it != hi; ++it) {
                            const Node& a = mover.state(m.target);
                            const Node& b = other.state(it->target);
                            if (left_moves ? r.contains(a, b) : r.contains(b, a)) return true;
                          }
                          return false;
                        });
}

std::vector<Node> tau_reach(const Node& n, std::size_t bound) {
  ExplorationConfig cfg;
  cfg.depth_bound = bound;
  cfg.tau_only = true;
  return explore(n, cfg).states();
}

// ---------------------------------------------------------------- fixpoint

namespace {

struct Fixpoint {
  const Lts& left;
  const Lts& right;
  const MoveTable& lm;
  const MoveTable& rm;
  std::vector<char> alive;
  std::vector<std::optional<UnmatchedMove>> why;
  bool optimistic;

  std::size_t at(std::size_t i, std::size_t j) const { return i * right.size() + j; }

  bool pinned(std::size_t i, std::size_t j) const {
    return optimistic && (left.truncated(i) || right.truncated(j));
  }

  // First unanswered move of the pair, if any.
  std::optional<UnmatchedMove> unanswered(std::size_t i, std::size_t j) const {
    for (const Move& m : lm.visible[i]) {
      if (optimistic && rm.weak_uncertain[j]) break;
      auto [lo, hi] = rm.weak_with(j, m.label);
      bool ok = std::any_of(lo, hi, [&](const Move& k) { return alive[at(m.target, k.target)]; });
      if (!ok) return unmatched(left, {i, j}, true, m, "no tau* a tau* answer reaches a related pair");
    }
    for (const Move& m : rm.visible[j]) {
      if (optimistic && lm.weak_uncertain[i]) break;
      auto [lo, hi] = lm.weak_with(i, m.label);
      bool ok = std::any_of(lo, hi, [&](const Move& k) { return alive[at(k.target, m.target)]; });
      if (!ok) return unmatched(right, {i, j}, false, m, "no tau* a tau* answer reaches a related pair");
    }
    return std::nullopt;
  }

  void run() {
    const std::size_t n = left.size();
    const std::size_t m = right.size();
    alive.assign(n * m, 1);
    why.assign(n * m, std::nullopt);
    if (!optimistic) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (left.truncated(i) || right.truncated(j)) alive[at(i, j)] = 0;
        }
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (!alive[at(i, j)] || pinned(i, j)) continue;
          if (auto miss = unanswered(i, j)) {
            alive[at(i, j)] = 0;
            why[at(i, j)] = std::move(miss);
            changed = true;
          }
        }
      }
    }
  }
};

// Pair matrices beyond this size are not attempted.
constexpr std::size_t kMaxPairs = 20'000'000;

}  // namespace

WeakResult weakly_bisimilar(const Node& a, const Node& b, const ExplorationConfig& cfg) {
  ExplorationConfig full = cfg;
  full.tau_only = false;
  WeakResult result{{}, explore(a, full), explore(b, full)};
  const Lts& left = result.left;
  const Lts& right = result.right;
  if (left.size() * right.size() > kMaxPairs) {
    result.report.verdict = Verdict::UnknownAtBound;
    result.report.unknown.emplace_back(Lts::initial, Lts::initial);
    return result;
  }

  Labels labels;
  MoveTable lm = build_moves(left, labels);
  MoveTable rm = build_moves(right, labels);

  Fixpoint sure{left, right, lm, rm, {}, {}, false};
  sure.run();
  if (sure.alive[0]) {
    result.report.verdict = Verdict::Holds;
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j) {
        if (sure.alive[sure.at(i, j)]) result.report.witness.emplace_back(i, j);
      }
    }
    return result;
  }

  Fixpoint hopeful{left, right, lm, rm, {}, {}, true};
  hopeful.run();
  if (!hopeful.alive[0]) {
    result.report.verdict = Verdict::FailsAt;
    result.report.failure = hopeful.why[0];
    return result;
  }
  result.report.verdict = Verdict::UnknownAtBound;
  constexpr std::size_t kMaxListed = 100;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (result.report.unknown.size() >= kMaxListed) break;
      if (hopeful.alive[hopeful.at(i, j)] && (left.truncated(i) || right.truncated(j))) {
        result.report.unknown.emplace_back(i, j);
      }
    }
  }
  return result;
}

}  // namespace cerl
