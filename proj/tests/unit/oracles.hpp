#pragma once

// Reference implementations used as test oracles. They share nothing with the
// library beyond the term representation, substitution and matching.

#include <optional>
#include <set>
#include <variant>

#include "cerl/explorer.hpp"

namespace oracle {

using namespace cerl;

struct Diverged {};
struct Blocked {};
using BigStep = std::variant<Value, Blocked, Diverged>;

/// Recursive big-step evaluation of a closed sequential expression.
/// Blocked covers stuck terms and anything concurrent.
class Evaluator {
 public:
  explicit Evaluator(std::size_t fuel) : fuel_(fuel) {}

  BigStep eval(const Expr& e) {
    if (fuel_ == 0) return Diverged{};
    --fuel_;
    if (const Value* v = e.as_value()) return *v;
    if (const auto* x = e.get_if<Let>()) {
      auto b = eval(x->bound);
      if (!std::holds_alternative<Value>(b)) return b;
      Bindings bs;
      bs.bind(x->var, std::get<Value>(b));
      return eval(subst(x->body, bs));
    }
    if (const auto* x = e.get_if<ConsE>()) {
      auto t = eval(x->tail);
      if (!std::holds_alternative<Value>(t)) return t;
      auto h = eval(x->head);
      if (!std::holds_alternative<Value>(h)) return h;
      return Value::cons(std::get<Value>(h), std::get<Value>(t));
    }
    if (const auto* x = e.get_if<Case>()) {
      auto s = eval(x->scrutinee);
      if (!std::holds_alternative<Value>(s)) return s;
      if (auto b = match_bind(x->pattern, std::get<Value>(s))) return eval(subst(x->then_branch, *b));
      return eval(x->else_branch);
    }
    if (const auto* x = e.get_if<Letrec>()) {
      Bindings bs;
      bs.bind(x->id, Value::fun(x->id, x->params, x->fun_body));
      return eval(subst(x->body, bs));
    }
    if (const auto* x = e.get_if<Apply>()) {
      auto f = eval(x->fn);
      if (!std::holds_alternative<Value>(f)) return f;
      std::vector<Value> args;
      for (const auto& a : x->args) {
        auto r = eval(a);
        if (!std::holds_alternative<Value>(r)) return r;
        args.push_back(std::get<Value>(r));
      }
      const Value fv = std::get<Value>(f);
      const auto* fn = fv.get_if<Fun>();
      if (fn == nullptr || fn->params.size() != args.size()) return Blocked{};
      Bindings bs;
      bs.bind(fn->id, fv);
      for (std::size_t i = 0; i < args.size(); ++i) bs.bind(fn->params[i], args[i]);
      return eval(subst(fn->body, bs));
    }
    if (const auto* x = e.get_if<Call>()) {
      auto f = eval(x->fn);
      if (!std::holds_alternative<Value>(f)) return f;
      std::vector<Value> args;
      for (const auto& a : x->args) {
        auto r = eval(a);
        if (!std::holds_alternative<Value>(r)) return r;
        args.push_back(std::get<Value>(r));
      }
      const auto* name = std::get<Value>(f).get_if<Atom>();
      if (name == nullptr || name->name != "+" || args.size() != 2) return Blocked{};
      const auto* a = args[0].get_if<Integer>();
      const auto* b = args[1].get_if<Integer>();
      if (a == nullptr || b == nullptr) return Blocked{};
      return Value::integer(*a + *b);
    }
    return Blocked{};
  }

 private:
  std::size_t fuel_;
};

/// Weak moves s =tau* a tau*=> t by plain graph search over the edge list.
inline std::set<std::size_t> weak_targets(const Lts& lts, std::size_t s, Pid pid, const Action& a) {
  auto tau_closure = [&](std::set<std::size_t> from) {
    std::vector<std::size_t> todo(from.begin(), from.end());
    while (!todo.empty()) {
      const std::size_t x = todo.back();
      todo.pop_back();
      for (const auto& e : lts.edges()) {
        if (e.from == x && is_tau(e.action) && from.insert(e.to).second) todo.push_back(e.to);
      }
    }
    return from;
  };
  std::set<std::size_t> mid;
  for (std::size_t x : tau_closure({s})) {
    for (const auto& e : lts.edges()) {
      if (e.from == x && e.pid == pid && e.action == a) mid.insert(e.to);
    }
  }
  return tau_closure(mid);
}

/// Largest relation in which every non-tau move of either side is answered
/// weakly, computed by deleting pairs until nothing changes.
inline bool weakly_related(const Lts& l, const Lts& r) {
  std::vector<std::vector<bool>> rel(l.size(), std::vector<bool>(r.size(), true));
  auto answered = [&](const Lts& mover, std::size_t from, const Lts& other, std::size_t at,
                      bool left_moves) {
    for (const auto& e : mover.edges()) {
      if (e.from != from || is_tau(e.action)) continue;
      bool ok = false;
      for (std::size_t t : weak_targets(other, at, e.pid, e.action)) {
        if (left_moves ? rel[e.to][t] : rel[t][e.to]) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < l.size(); ++i) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (rel[i][j] && !(answered(l, i, r, j, true) && answered(r, j, l, i, false))) {
          rel[i][j] = false;
          changed = true;
        }
      }
    }
  }
  return rel[Lts::initial][Lts::initial];
}

}  // namespace oracle
