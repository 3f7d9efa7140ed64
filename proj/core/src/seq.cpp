#include "cerl/seq.hpp"

#include "cerl/hash.hpp"

namespace cerl {

namespace {

void mix_exprs(std::size_t& seed, const std::vector<Expr>& es) {
  hash_mix(seed, es.size());
  for (const auto& e : es) hash_combine(seed, e.hash());
}

void mix_values(std::size_t& seed, const std::vector<Value>& vs) {
  hash_mix(seed, vs.size());
  for (const auto& v : vs) hash_combine(seed, v.hash());
}

template <class T>
std::vector<T> tail_of(const std::vector<T>& xs) {
  return {xs.begin() + 1, xs.end()};
}

std::vector<Value> appended(std::vector<Value> xs, const Value& v) {
  xs.push_back(v);
  return xs;
}

/// Beta-reduction: substitute the function itself and the arguments.
Expr beta(const Value& fn_value, const Fun& fn, const std::vector<Value>& args) {
  Bindings b;
  b.bind(fn.id, fn_value);
  for (std::size_t i = 0; i < args.size(); ++i) b.bind(fn.params[i], args[i]);
  return subst(fn.body, b);
}

}  // namespace

std::size_t hash_frame(const Frame& f) {
  std::size_t seed = f.index() + 0x7f4a7c15ULL;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CallFun> || std::is_same_v<T, ApplyFun>) {
          mix_exprs(seed, x.args);
        } else if constexpr (std::is_same_v<T, CallArgs> || std::is_same_v<T, ApplyArgs>) {
          hash_combine(seed, x.fn.hash());
          mix_values(seed, x.done);
          mix_exprs(seed, x.todo);
        } else if constexpr (std::is_same_v<T, LetFrame>) {
          hash_mix(seed, x.var);
          hash_combine(seed, x.body.hash());
        } else if constexpr (std::is_same_v<T, CaseFrame>) {
          hash_combine(seed, x.pattern.hash());
          hash_combine(seed, x.then_branch.hash());
          hash_combine(seed, x.else_branch.hash());
        } else if constexpr (std::is_same_v<T, ConsTail>) {
          hash_combine(seed, x.head.hash());
        } else {
          hash_combine(seed, x.tail.hash());
        }
      },
      f);
  return seed;
}

// ---------------------------------------------------------------- FrameStack

struct FrameStack::Cell {
  Frame frame;
  FrameStack rest;
  std::size_t hash;
  std::size_t size;
};

std::size_t FrameStack::size() const { return cell_ ? cell_->size : 0; }
const Frame& FrameStack::top() const { return cell_->frame; }
const FrameStack& FrameStack::pop() const { return cell_->rest; }

FrameStack FrameStack::push(Frame f) const {
  std::size_t seed = hash();
  hash_combine(seed, hash_frame(f));
  return FrameStack(std::make_shared<const Cell>(Cell{std::move(f), *this, seed, size() + 1}));
}

std::size_t FrameStack::hash() const { return cell_ ? cell_->hash : 0x1d; }

std::vector<Frame> FrameStack::frames() const {
  std::vector<Frame> out;
  for (const Cell* c = cell_.get(); c != nullptr; c = c->rest.cell_.get()) out.push_back(c->frame);
  return out;
}

FrameStack FrameStack::from_frames(const std::vector<Frame>& top_first) {
  FrameStack k;
  for (auto it = top_first.rbegin(); it != top_first.rend(); ++it) k = k.push(*it);
  return k;
}

bool operator==(const FrameStack& a, const FrameStack& b) {
  const FrameStack::Cell* x = a.cell_.get();
  const FrameStack::Cell* y = b.cell_.get();
  while (x != y) {
    if (x == nullptr || y == nullptr) return false;
    if (x->hash != y->hash || x->size != y->size) return false;
    if (!(x->frame == y->frame)) return false;
    x = x->rest.cell_.get();
    y = y->rest.cell_.get();
  }
  return true;
}

// ---------------------------------------------------------------- stepping

std::optional<SeqStep> seq_step_tagged(const FrameStack& k, const Expr& e) {
  using R = std::optional<SeqStep>;
  const Value* v = e.as_value();
  if (v == nullptr) {
    return std::visit(
        [&](const auto& x) -> R {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Let>) {
            return SeqStep{k.push(LetFrame{x.var, x.body}), x.bound, SeqRule::Push};
          } else if constexpr (std::is_same_v<T, ConsE>) {
            // lists are evaluated tail first
            return SeqStep{k.push(ConsTail{x.head}), x.tail, SeqRule::Push};
          } else if constexpr (std::is_same_v<T, Apply>) {
            return SeqStep{k.push(ApplyFun{x.args}), x.fn, SeqRule::Push};
          } else if constexpr (std::is_same_v<T, Call>) {
            return SeqStep{k.push(CallFun{x.args}), x.fn, SeqRule::Push};
          } else if constexpr (std::is_same_v<T, Case>) {
            return SeqStep{k.push(CaseFrame{x.pattern, x.then_branch, x.else_branch}),
                           x.scrutinee, SeqRule::Push};
          } else if constexpr (std::is_same_v<T, Letrec>) {
            Bindings b;
            b.bind(x.id, Value::fun(x.id, x.params, x.fun_body));
            return SeqStep{k, subst(x.body, b), SeqRule::Letrec};
          } else {
            return std::nullopt;  // Var, FunRef, Receive, Val handled elsewhere
          }
        },
        e.variant());
  }

  if (k.empty()) return std::nullopt;
  const FrameStack& rest = k.pop();
  return std::visit(
      [&](const auto& f) -> R {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ApplyFun>) {
          if (!f.args.empty()) {
            return SeqStep{rest.push(ApplyArgs{*v, {}, tail_of(f.args)}), f.args.front(),
                           SeqRule::Shift};
          }
          const auto* fn = v->get_if<Fun>();
          if (fn == nullptr || fn->id.arity != 0) return std::nullopt;
          return SeqStep{rest, beta(*v, *fn, {}), SeqRule::Pop};
        } else if constexpr (std::is_same_v<T, CallFun>) {
          if (f.args.empty()) return std::nullopt;
          return SeqStep{rest.push(CallArgs{*v, {}, tail_of(f.args)}), f.args.front(),
                         SeqRule::Shift};
        } else if constexpr (std::is_same_v<T, ApplyArgs>) {
          if (!f.todo.empty()) {
            return SeqStep{rest.push(ApplyArgs{f.fn, appended(f.done, *v), tail_of(f.todo)}),
                           f.todo.front(), SeqRule::Shift};
          }
          const auto* fn = f.fn.template get_if<Fun>();
          if (fn == nullptr || fn->id.arity != f.done.size() + 1) return std::nullopt;
          return SeqStep{rest, beta(f.fn, *fn, appended(f.done, *v)), SeqRule::Pop};
        } else if constexpr (std::is_same_v<T, CallArgs>) {
          if (!f.todo.empty()) {
            return SeqStep{rest.push(CallArgs{f.fn, appended(f.done, *v), tail_of(f.todo)}),
                           f.todo.front(), SeqRule::Shift};
          }
          if (!f.fn.is_atom("+") || f.done.size() != 1) return std::nullopt;
          const auto* lhs = f.done.front().template get_if<Integer>();
          const auto* rhs = v->get_if<Integer>();
          if (lhs == nullptr || rhs == nullptr) return std::nullopt;
          return SeqStep{rest, val(Value::integer(*lhs + *rhs)), SeqRule::Pop};
        } else if constexpr (std::is_same_v<T, LetFrame>) {
          Bindings b;
          b.bind(f.var, *v);
          return SeqStep{rest, subst(f.body, b), SeqRule::Pop};
        } else if constexpr (std::is_same_v<T, CaseFrame>) {
          if (auto b = match_bind(f.pattern, *v)) {
            return SeqStep{rest, subst(f.then_branch, *b), SeqRule::Pop};
          }
          return SeqStep{rest, f.else_branch, SeqRule::Pop};
        } else if constexpr (std::is_same_v<T, ConsTail>) {
          return SeqStep{rest.push(ConsHead{*v}), f.head, SeqRule::Shift};
        } else {
          return SeqStep{rest, val(Value::cons(*v, f.tail)), SeqRule::Pop};
        }
      },
      k.top());
}

std::optional<std::pair<FrameStack, Expr>> seq_step(const FrameStack& k, const Expr& e) {
  auto s = seq_step_tagged(k, e);
  if (!s) return std::nullopt;
  return std::pair{std::move(s->stack), std::move(s->redex)};
}

// ---------------------------------------------------------------- classify

namespace {

RedexClass classify_bif(const CallArgs& f, const Value& last, const FrameStack& rest) {
  const auto* name = f.fn.get_if<Atom>();
  if (name == nullptr) return Stuck{"call of a non-atom"};
  const auto arity = f.done.size() + 1;
  const auto* last_pid = last.get_if<Pid>();
  auto dispatch = [&](DispatchShape s) -> RedexClass { return ConcDispatch{*name, std::move(s), rest}; };

  if (name->name == "!" && arity == 2) {
    const auto* target = f.done[0].get_if<Pid>();
    if (target == nullptr) return Stuck{"'!' to a non-pid"};
    return dispatch(SendShape{*target, last});
  }
  if (name->name == "exit" && arity == 2) {
    const auto* target = f.done[0].get_if<Pid>();
    if (target == nullptr) return Stuck{"'exit'/2 to a non-pid"};
    return dispatch(Exit2Shape{*target, last});
  }
  if (name->name == "exit" && arity == 1) return dispatch(Exit1Shape{last});
  if (name->name == "link" && arity == 1) {
    if (last_pid == nullptr) return Stuck{"'link' of a non-pid"};
    return dispatch(LinkShape{*last_pid});
  }
  if (name->name == "unlink" && arity == 1) {
    if (last_pid == nullptr) return Stuck{"'unlink' of a non-pid"};
    return dispatch(UnlinkShape{*last_pid});
  }
  if (name->name == "spawn" && arity == 2) {
    if (!f.done[0].is<Fun>()) return Stuck{"'spawn' of a non-function"};
    return dispatch(SpawnShape{f.done[0], last});
  }
  if (name->name == "process_flag" && arity == 2) {
    if (!f.done[0].is_atom("trap_exit")) return Stuck{"unsupported process flag"};
    if (!atom_to_bool(last)) return Stuck{"'process_flag' with a non-boolean value"};
    return dispatch(FlagShape{last});
  }
  if (name->name == "+" && arity == 2) return Stuck{"'+' on non-integers"};
  return Stuck{"unknown BIF '" + name->name + "'/" + std::to_string(arity)};
}

}  // namespace

RedexClass classify_redex(const FrameStack& k, const Expr& e) {
  if (seq_step_tagged(k, e)) return TauRedex{};
  if (e.is<Receive>()) return ReceiveRedex{};
  if (const auto* x = e.get_if<Var>()) return Stuck{"unbound variable " + x->name};
  if (const auto* x = e.get_if<FunRef>()) {
    return Stuck{"unbound function '" + x->id.name + "'/" + std::to_string(x->id.arity)};
  }
  const Value* v = e.as_value();
  if (v == nullptr) return Stuck{"no rule applies"};
  if (k.empty()) return FinalValue{*v};

  const FrameStack& rest = k.pop();
  return std::visit(
      [&](const auto& f) -> RedexClass {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, CallFun>) {
          if (v->is_atom("self")) return ConcDispatch{Atom{"self"}, SelfShape{}, rest};
          return Stuck{"unknown BIF of arity 0"};
        } else if constexpr (std::is_same_v<T, CallArgs>) {
          return classify_bif(f, *v, rest);
        } else if constexpr (std::is_same_v<T, ApplyFun>) {
          return v->is<Fun>() ? RedexClass{Stuck{"arity mismatch"}}
                              : RedexClass{Stuck{"apply of non-function"}};
        } else if constexpr (std::is_same_v<T, ApplyArgs>) {
          return f.fn.template is<Fun>() ? RedexClass{Stuck{"arity mismatch"}}
                                         : RedexClass{Stuck{"apply of non-function"}};
        } else {
          return Stuck{"no rule applies"};
        }
      },
      k.top());
}

SeqOutcome seq_eval(const FrameStack& k, const Expr& e, std::size_t fuel) {
  FrameStack stack = k;
  Expr redex = e;
  for (std::size_t i = 0; i < fuel; ++i) {
    auto next = seq_step_tagged(stack, redex);
    if (!next) break;
    stack = std::move(next->stack);
    redex = std::move(next->redex);
  }
  RedexClass cls = classify_redex(stack, redex);
  if (const auto* fin = std::get_if<FinalValue>(&cls)) return Finished{fin->value};
  if (std::holds_alternative<TauRedex>(cls)) return OutOfFuel{std::move(stack), std::move(redex)};
  return Suspended{std::move(stack), std::move(redex), std::move(cls)};
}

}  // namespace cerl
