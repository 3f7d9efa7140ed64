#pragma once

// JSON encodings of terms, traces, node configurations, node renderings,
// transition systems and equivalence reports.
//
// Terms are encoded structurally so that decoding is exact:
//   value   {"int":"42"} {"atom":"x"} {"pid":2} {"nil":true} {"cons":[h,t]}
//           {"fun":{"name":"f","arity":1,"params":["X"],"body":EXPR}}
//   pattern the value forms without "fun", plus {"var":"X"}
//   expr    {"val":V} {"var":"X"} {"funref":{"name","arity"}}
//           {"apply":{"fn","args"}} {"call":{"fn","args"}}
//           {"case":{"scrutinee","pattern","then","else"}}
//           {"let":{"var","bound","body"}} {"cons":[h,t]}
//           {"letrec":{"name","arity","params","fun_body","body"}}
//           {"receive":[{"pattern","body"}]}
// Decoders also accept a string holding concrete syntax wherever a value,
// pattern or expression is expected, and a JSON integer for an integer value.

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "cerl/equivalence.hpp"
#include "cerl/explorer.hpp"
#include "cerl/node.hpp"

namespace cerl {

using json = nlohmann::json;

/// Malformed or semantically invalid input document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Value& v);
json to_json(const Pattern& p);
json to_json(const Expr& e);
json to_json(const Signal& s);
json to_json(const Action& a);
json to_json(const Trace& t);

Value value_from_json(const json& j);
Pattern pattern_from_json(const json& j);
Expr expr_from_json(const json& j);
Signal signal_from_json(const json& j);
Action action_from_json(const json& j);
Trace trace_from_json(const json& j);

/// Initial node from a configuration document:
///   {"processes":[{"pid":1,"expr":"...","mailbox":[...],"links":[...],
///                  "trap_exit":false}
///                 | {"pid":3,"dead":[{"to":2,"reason":V}]}],
///    "ether":[{"from":1,"to":2,"signals":[SIGNAL...]}]}
Node node_from_config(const json& doc);

/// Inverse of node_from_config for nodes whose live processes have an empty
/// frame stack; other processes are encoded with their stack.
json node_to_config(const Node& n);

/// Human-oriented rendering of a node with every field spelled out.
json render_node(const Node& n);

json lts_to_json(const Lts& lts);
json report_to_json(const BisimReport& r, const Lts& left, const Lts& right);

}  // namespace cerl
