#pragma once

// Built-in example programs and nodes. The same programs ship as files in
// corpus/ for the command line tool.

#include <string_view>

#include "cerl/node.hpp"

namespace cerl::examples {

/// Maps the successor function over [0, 1, 2].
inline constexpr std::string_view kMapSource = R"(letrec 'mm'/2 =
  fun(F, E) ->
    case E of [H|T]
      then [ apply F(H) | apply 'mm'/2(F, T) ]
      else []
    end
  in apply 'mm'/2(fun(X) -> call '+'(X, 1) end, [0, 1, 2])
)";

/// Process 1 running the map program.
Node map_node();
/// Process 1 holding the result of the map program.
Node map_result_node();

/// Three processes: #1 sends 'fst' to #2 and 'snd' to #3, #2 forwards what it
/// receives to #3, #3 receives one message.
Node signal_order_node();

/// #1 links to #2 and then kills itself, either with exit/2 addressed to
/// itself or with exit/1. #2 traps exits and waits for a message.
Node exit_kill_node(bool exit2);

/// Process 0 evaluating `let X = 0 in X` with an explicit 'kill' from #1
/// already in the ether.
Node let_kill_node();

}  // namespace cerl::examples
