#include "cerl/examples.hpp"

#include "cerl/text.hpp"

namespace cerl::examples {

Node map_node() { return make_node({{Pid{1}, parse_expr(kMapSource)}}); }

Node map_result_node() { return make_node({{Pid{1}, parse_expr("[1, 2, 3]")}}); }

Node signal_order_node() {
  return make_node({{Pid{1}, parse_expr("let X = call '!'(#2, 'fst') in call '!'(#3, 'snd')")},
                    {Pid{2}, parse_expr("receive X -> call '!'(#3, X) end")},
                    {Pid{3}, parse_expr("receive X -> X end")}});
}

Node exit_kill_node(bool exit2) {
  const char* first = exit2 ? "let X = call 'link'(#2) in call 'exit'(#1, 'kill')"
                            : "let X = call 'link'(#2) in call 'exit'('kill')";
  Node n = make_node({{Pid{1}, parse_expr(first)}, {Pid{2}, parse_expr("receive X -> X end")}});
  std::get<LiveProcess>(n.pool.at(Pid{2})).trap_exit = true;
  return n;
}

Node let_kill_node() {
  Node n = make_node({{Pid{0}, parse_expr("let X = 0 in X")}});
  n.ether = n.ether.push(Pid{1}, Pid{0}, ExitSignal{Value::atom("kill"), false});
  return n;
}

}  // namespace cerl::examples
