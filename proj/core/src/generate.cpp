#include "cerl/generate.hpp"

#include <algorithm>

namespace cerl {

namespace {

const char* const kAtoms[] = {"a", "b", "ok", "normal", "true", "false"};

Expr pid_expr(std::uint64_t id) { return val(Value::pid(Pid{id})); }
Expr atom_expr(const char* name) { return val(Value::atom(name)); }

}  // namespace

std::size_t Generator::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string Generator::fresh_var() { return "V" + std::to_string(counter_++); }
std::string Generator::fresh_fun() { return "g" + std::to_string(counter_++); }

Value Generator::value(std::size_t depth, bool allow_fun) {
  const std::size_t kinds = depth == 0 ? 4 : (allow_fun ? 6 : 5);
  switch (below(kinds)) {
    case 0:
      return Value::integer(static_cast<int>(below(8)) - 2);
    case 1:
      return Value::atom(kAtoms[below(std::size(kAtoms))]);
    case 2:
      return Value::pid(Pid{1 + below(max_pid)});
    case 3:
      return Value::nil();
    case 4: {
      std::vector<Value> items;
      for (std::size_t i = below(4); i > 0; --i) items.push_back(value(depth - 1, allow_fun));
      return Value::list(items);
    }
    default: {
      const std::size_t arity = below(3);
      std::vector<std::string> params;
      for (std::size_t i = 0; i < arity; ++i) params.push_back(fresh_var());
      Expr body = params.empty() || chance(0.5) ? val(value(0, false)) : var(params[below(arity)]);
      return Value::fun(FunId{fresh_fun(), arity}, params, body);
    }
  }
}

Pattern Generator::pattern_with(std::size_t depth, std::vector<std::string>& used) {
  switch (below(depth == 0 ? 4 : 5)) {
    case 0:
      return Pattern::integer(static_cast<int>(below(4)));
    case 1:
      return Pattern::atom(kAtoms[below(3)]);
    case 2:
      return Pattern::nil();
    case 3: {
      used.push_back(fresh_var());
      return Pattern::var(used.back());
    }
    default: {
      Pattern head = pattern_with(depth - 1, used);
      Pattern tail = pattern_with(depth - 1, used);
      return Pattern::cons(head, tail);
    }
  }
}

Pattern Generator::pattern(std::size_t depth) {
  std::vector<std::string> used;
  return pattern_with(depth, used);
}

Expr Generator::int_expr(std::size_t depth, const std::vector<std::string>& scope) {
  if (!scope.empty() && chance(0.3)) return var(scope[below(scope.size())]);
  if (depth == 0 || chance(0.5)) return val(Value::integer(static_cast<int>(below(6))));
  return bif("+", {int_expr(depth - 1, scope), int_expr(depth - 1, scope)});
}

Expr Generator::seq_expr_in(std::size_t depth, const std::vector<std::string>& scope) {
  if (depth == 0) {
    if (!scope.empty() && chance(0.5)) return var(scope[below(scope.size())]);
    return val(value(1, false));
  }
  switch (below(10)) {
    case 0:
      return val(value(2));
    case 1: {
      if (scope.empty()) return val(value(1));
      return var(scope[below(scope.size())]);
    }
    case 2: {
      std::string x = fresh_var();
      auto inner = scope;
      inner.push_back(x);
      return let(x, seq_expr_in(depth - 1, scope), seq_expr_in(depth - 1, inner));
    }
    case 3: {
      // occasionally adds something that is not an integer
      if (chance(0.1)) return bif("+", {val(value(1, false)), int_expr(depth - 1, scope)});
      return bif("+", {int_expr(depth - 1, scope), int_expr(depth - 1, scope)});
    }
    case 4: {
      std::vector<std::string> bound;
      Pattern p = pattern_with(2, bound);
      auto inner = scope;
      inner.insert(inner.end(), bound.begin(), bound.end());
      return case_of(seq_expr_in(depth - 1, scope), p, seq_expr_in(depth - 1, inner),
                     seq_expr_in(depth - 1, scope));
    }
    case 5:
      return cons(seq_expr_in(depth - 1, scope), seq_expr_in(depth - 1, scope));
    case 6: {
      const std::size_t arity = below(3);
      std::vector<std::string> params;
      for (std::size_t i = 0; i < arity; ++i) params.push_back(fresh_var());
      auto inner = scope;
      inner.insert(inner.end(), params.begin(), params.end());
      Expr body = seq_expr_in(depth - 1, inner);
      Value fn = Value::fun(FunId{fresh_fun(), arity}, params, body);
      // one in ten calls passes the wrong number of arguments
      std::size_t given = chance(0.1) ? below(3) : arity;
      std::vector<Expr> args;
      for (std::size_t i = 0; i < given; ++i) args.push_back(seq_expr_in(depth - 1, scope));
      return apply(val(fn), args);
    }
    case 7: {
      // a bounded recursion over a list, in the style of map
      FunId f{fresh_fun(), 1};
      std::string l = fresh_var(), h = fresh_var(), t = fresh_var();
      Expr step = cons(bif("+", {var(h), val(Value::integer(1))}), apply(fun_ref(f), {var(t)}));
      Expr body = case_of(var(l), Pattern::cons(Pattern::var(h), Pattern::var(t)), step,
                          val(Value::nil()));
      std::vector<Value> items;
      for (std::size_t i = below(4); i > 0; --i) items.push_back(Value::integer(static_cast<int>(below(5))));
      return letrec(f, {l}, body, apply(fun_ref(f), {val(Value::list(items))}));
    }
    case 8: {
      if (chance(0.2)) return apply(val(value(0, false)), {});
      FunId f{fresh_fun(), 0};
      return letrec(f, {}, seq_expr_in(depth - 1, scope), apply(fun_ref(f), {}));
    }
    default:
      return val(value(1, false));
  }
}

Expr Generator::seq_expr(std::size_t depth) { return seq_expr_in(depth, {}); }

std::pair<FrameStack, Expr> Generator::seq_config() {
  FrameStack k;
  Expr e = seq_expr(3 + below(3));
  for (std::size_t n = below(40); n > 0; --n) {
    auto next = seq_step(k, e);
    if (!next) break;
    k = std::move(next->first);
    e = std::move(next->second);
  }
  return {k, e};
}

Value Generator::reason() {
  const char* const reasons[] = {"normal", "kill", "killed", "boom"};
  return Value::atom(reasons[below(4)]);
}

Signal Generator::signal() {
  switch (below(4)) {
    case 0:
    case 1:
      return Message{value(1, false)};
    case 2:
      return ExitSignal{reason(), chance(0.5)};
    default:
      return chance(0.5) ? Signal{LinkSignal{}} : Signal{UnlinkSignal{}};
  }
}

Expr Generator::statement() {
  const auto target = [&] { return pid_expr(1 + below(max_pid)); };
  switch (below(11)) {
    case 0:
    case 1:
      return bif("!", {target(), val(value(1, false))});
    case 2:
    case 3: {
      std::string x = fresh_var();
      std::vector<Clause> clauses;
      if (chance(0.4)) clauses.push_back({Pattern::atom(kAtoms[below(3)]), val(Value::integer(1))});
      clauses.push_back({Pattern::var(x), var(x)});
      return receive(clauses);
    }
    case 4:
      return bif("link", {target()});
    case 5:
      return bif("unlink", {target()});
    case 6:
      return bif("exit", {target(), val(reason())});
    case 7:
      return bif("process_flag", {atom_expr("trap_exit"), atom_expr(chance(0.5) ? "true" : "false")});
    case 8:
      return call(atom_expr("self"), {});
    case 9: {
      Value fn = Value::fun(FunId{fresh_fun(), 0}, {}, bif("!", {target(), atom_expr("a")}));
      return bif("spawn", {val(fn), val(Value::nil())});
    }
    default:
      return bif("+", {val(Value::integer(1)), val(Value::integer(2))});
  }
}

Expr Generator::program(std::size_t statements) {
  Expr e = chance(0.2) ? bif("exit", {val(reason())}) : val(value(1, false));
  for (std::size_t i = 0; i < statements; ++i) e = let(fresh_var(), statement(), e);
  return e;
}

Node Generator::node() {
  const std::size_t count = 2 + below(2);
  max_pid = count;
  Node n;
  for (std::uint64_t id = 1; id <= count; ++id) {
    if (id > 1 && chance(0.1)) {
      DeadProcess d;
      d.obligations.emplace_back(Pid{1 + below(count)}, reason());
      n.pool.emplace(Pid{id}, d);
      continue;
    }
    LiveProcess p = std::get<LiveProcess>(make_process(program(1 + below(2))));
    if (chance(0.2)) p.mailbox.push_back(value(1, false));
    if (chance(0.2)) p.links.push_back(Pid{1 + below(count)});
    p.trap_exit = chance(0.3);
    n.pool.emplace(Pid{id}, p);
  }
  if (chance(0.3)) n.ether = n.ether.push(Pid{1 + below(count)}, Pid{1 + below(count)}, signal());
  return n;
}

}  // namespace cerl
