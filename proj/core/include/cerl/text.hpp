#pragma once

// Concrete syntax: printing and parsing of expressions, values and patterns,
// and human-readable renderings of frames, signals and actions.
//
//   e ::= 42 | -7 | 'atom' | #3 | X | 'f'/2 | [] | [e1, ..., en] | [e | e]
//       | fun 'f'/k(X1, ..., Xk) -> e end | fun(X1, ..., Xk) -> e end
//       | let X = e in e
//       | letrec 'f'/k = fun(X1, ..., Xk) -> e [end] in e
//       | apply e(e1, ..., ek) | call e(e1, ..., ek)
//       | case e of p then e else e end
//       | receive p1 -> e1; ...; pk -> ek end
//       | ( e )
//
// `%` starts a comment that runs to the end of the line.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cerl/node.hpp"
#include "cerl/process.hpp"
#include "cerl/seq.hpp"
#include "cerl/syntax.hpp"

namespace cerl {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Scope, Linearity };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Parses a closed expression. Anonymous funs are named '-fun-N-'/k with N
/// counting from 0 in source order.
Expr parse_expr(std::string_view src);
/// Parses an expression that must denote a value (lists of values included).
Value parse_value(std::string_view src);
Pattern parse_pattern(std::string_view src);

/// The value an expression denotes syntactically: Val, or lists built from
/// values. nullopt otherwise.
std::optional<Value> expr_to_value(const Expr& e);

std::string print(const Expr& e);
std::string print(const Value& v);
std::string print(const Pattern& p);
std::string print_atom(const std::string& name);
std::string print_fun_id(const FunId& id);

/// A frame with its hole shown as `□`.
std::string print_frame(const Frame& f);
std::string print_signal(const Signal& s);
std::string print_action(const Action& a);
/// Multi-line listing of every process and every non-empty ether queue.
std::string print_node(const Node& n);

}  // namespace cerl
