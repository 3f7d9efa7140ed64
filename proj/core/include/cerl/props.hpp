#pragma once

// Executable property suites for the semantics: determinism against
// rule-table oracles, the exit decision table, the signal ordering guarantee,
// and the confluence, ordering and chaining properties checked exhaustively
// over explored transition systems.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cerl/explorer.hpp"

namespace cerl {

struct PropertyResult {
  PropertyResult() = default;
  explicit PropertyResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Descriptions of the first few failures.
  std::vector<std::string> samples;
  std::string note;
  double seconds = 0;

  bool ok() const { return failures == 0; }
  void fail(std::string what);
};

struct PropsConfig {
  std::uint64_t seed = 1;
  /// Generated cases per randomized suite.
  std::size_t cases = 1000;
  /// Two-send scenarios for the signal ordering suite.
  std::size_t ordering_cases = 500;
  /// Random nodes added to the built-in examples for the exhaustive suites.
  std::size_t random_nodes = 20;
  std::size_t depth = 12;
};

// Rule-table oracles. Each lists every result of a rule whose premise holds,
// one entry per rule instance, without going through the stepping functions.
std::vector<std::pair<FrameStack, Expr>> seq_rule_results(const FrameStack& k, const Expr& e);
std::vector<Process> local_rule_results(const Process& p, const Action& a);

/// Which exit rule premises hold. `term_reason` excludes an explicit 'kill',
/// which the first termination premise already covers.
struct ExitPremises {
  bool drop = false;
  bool term_killed = false;
  bool term_reason = false;
  bool term_normal = false;
  bool convert = false;
  /// The reason-preserving premise read literally, including explicit 'kill'.
  bool term_reason_literal = false;
  std::size_t count() const;
};

ExitPremises exit_premises(bool trap, const Value& reason, bool link_flag, bool from_self,
                           bool linked);

PropertyResult check_seq_determinism(const PropsConfig& cfg);
PropertyResult check_local_determinism(const PropsConfig& cfg);
PropertyResult check_exit_table();
PropertyResult check_signal_ordering(const PropsConfig& cfg);
PropertyResult check_local_tau_confluence(const PropsConfig& cfg);

/// Node-level tau confluence, action ordering, chaining and confluence of
/// sequential reductions over every state of each node's exploration.
std::vector<PropertyResult> check_node_properties(const std::vector<Node>& nodes,
                                                  const ExplorationConfig& cfg);

/// The built-in example nodes followed by `cfg.random_nodes` random ones.
std::vector<Node> property_nodes(const PropsConfig& cfg);

std::vector<PropertyResult> run_all_properties(const PropsConfig& cfg);

}  // namespace cerl
