#pragma once

// Seeded random generators for terms, processes and small nodes. Used by the
// property suites, the tests and the benchmarks.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "cerl/node.hpp"

namespace cerl {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  std::size_t below(std::size_t n);
  bool chance(double p);

  /// Small closed value: integers, atoms, pids #1..#max_pid, short lists and
  /// occasionally a function.
  Value value(std::size_t depth = 2, bool allow_fun = true);
  /// A pattern whose variables do not clash with each other.
  Pattern pattern(std::size_t depth = 2);
  /// A closed sequential expression. Mostly terminating; a fraction gets
  /// stuck on purpose (bad arithmetic, applying non-functions).
  Expr seq_expr(std::size_t depth = 4);

  /// A configuration reached by running a random expression for a random
  /// number of sequential steps.
  std::pair<FrameStack, Expr> seq_config();

  Signal signal();
  /// A short concurrent program talking to pids #1..#max_pid.
  Expr program(std::size_t statements);
  /// 2 or 3 processes, occasionally with pre-filled mailboxes, links, trap
  /// flags, dead processes and signals already in the ether.
  Node node();

  std::size_t max_pid = 3;

 private:
  std::string fresh_var();
  std::string fresh_fun();
  Expr seq_expr_in(std::size_t depth, const std::vector<std::string>& scope);
  Expr int_expr(std::size_t depth, const std::vector<std::string>& scope);
  Pattern pattern_with(std::size_t depth, std::vector<std::string>& used);
  Expr statement();
  Value reason();

  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
};

}  // namespace cerl
