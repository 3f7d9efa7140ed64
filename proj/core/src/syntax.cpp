#include "cerl/syntax.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "cerl/hash.hpp"

namespace cerl {

struct ValueNode {
  Value::Variant v;
  std::size_t hash = 0;
  std::vector<Name> free;
};

struct PatternNode {
  Pattern::Variant v;
  std::size_t hash = 0;
  std::vector<std::string> vars;
};

struct ExprNode {
  Expr::Variant v;
  std::size_t hash = 0;
  std::vector<Name> free;
};

namespace {

std::size_t hash_integer(const Integer& i) {
  static const Integer lo = std::numeric_limits<std::int64_t>::min();
  static const Integer hi = std::numeric_limits<std::int64_t>::max();
  if (i >= lo && i <= hi) return std::hash<std::int64_t>{}(i.convert_to<std::int64_t>());
  return std::hash<std::string>{}(i.str());
}

std::vector<Name> set_union(const std::vector<Name>& a, const std::vector<Name>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<Name> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void remove_names(std::vector<Name>& names, std::vector<Name> drop) {
  if (names.empty() || drop.empty()) return;
  std::sort(drop.begin(), drop.end());
  std::vector<Name> out;
  std::set_difference(names.begin(), names.end(), drop.begin(), drop.end(),
                      std::back_inserter(out));
  names = std::move(out);
}

std::vector<Name> as_names(std::span<const std::string> vars) {
  return {vars.begin(), vars.end()};
}

bool intersects(const std::vector<Name>& free, const Bindings& b) {
  if (free.empty() || b.empty()) return false;
  for (const auto& n : free) {
    if (b.contains(n)) return true;
  }
  return false;
}

void check_params(const FunId& id, const std::vector<std::string>& params) {
  if (params.size() != id.arity) {
    throw std::invalid_argument("function '" + id.name + "'/" + std::to_string(id.arity) +
                                " declared with " + std::to_string(params.size()) +
                                " parameters");
  }
  std::vector<std::string> sorted = params;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("repeated parameter in function '" + id.name + "'/" +
                                std::to_string(id.arity));
  }
}

std::vector<Name> fun_free(const FunId& id, const std::vector<std::string>& params,
                           const Expr& body) {
  std::vector<Name> free = body.free_names();
  std::vector<Name> drop = as_names(params);
  drop.emplace_back(id);
  remove_names(free, std::move(drop));
  return free;
}

}  // namespace

// ---------------------------------------------------------------- Value

Value Value::make(Variant v) {
  auto node = std::make_shared<ValueNode>();
  std::size_t seed = v.index() * 0x51ed27ULL;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          hash_combine(seed, hash_integer(x));
        } else if constexpr (std::is_same_v<T, Atom>) {
          hash_mix(seed, x.name);
        } else if constexpr (std::is_same_v<T, Pid>) {
          hash_mix(seed, x.id);
        } else if constexpr (std::is_same_v<T, Cons>) {
          hash_combine(seed, x.head.hash());
          hash_combine(seed, x.tail.hash());
          node->free = set_union(x.head.free_names(), x.tail.free_names());
        } else if constexpr (std::is_same_v<T, Fun>) {
          hash_mix(seed, x.id.name);
          hash_mix(seed, x.id.arity);
          for (const auto& p : x.params) hash_mix(seed, p);
          hash_combine(seed, x.body.hash());
          node->free = fun_free(x.id, x.params, x.body);
        }
      },
      v);
  node->hash = seed;
  node->v = std::move(v);
  return Value(std::move(node));
}

Value::Value() : Value(nil()) {}

Value Value::integer(Integer i) { return make(std::move(i)); }
Value Value::atom(std::string name) { return make(Atom{std::move(name)}); }
Value Value::pid(Pid p) { return make(p); }

Value Value::nil() {
  static const Value empty = make(Nil{});
  return empty;
}

Value Value::cons(Value head, Value tail) { return make(Cons{std::move(head), std::move(tail)}); }

Value Value::fun(FunId id, std::vector<std::string> params, Expr body) {
  check_params(id, params);
  return make(Fun{std::move(id), std::move(params), std::move(body)});
}

Value Value::list(std::span<const Value> items, Value tail) {
  Value acc = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) acc = cons(*it, std::move(acc));
  return acc;
}

const Value::Variant& Value::variant() const { return node_->v; }
std::size_t Value::hash() const { return node_->hash; }
const std::vector<Name>& Value::free_names() const { return node_->free; }

bool Value::is_atom(std::string_view name) const {
  const auto* a = get_if<Atom>();
  return a != nullptr && a->name == name;
}

bool operator==(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return a.node_->v == b.node_->v;
}

// ---------------------------------------------------------------- Pattern

Pattern Pattern::make(Variant v) {
  auto node = std::make_shared<PatternNode>();
  std::size_t seed = v.index() * 0x2545f491ULL;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          hash_combine(seed, hash_integer(x));
        } else if constexpr (std::is_same_v<T, Atom>) {
          hash_mix(seed, x.name);
        } else if constexpr (std::is_same_v<T, Pid>) {
          hash_mix(seed, x.id);
        } else if constexpr (std::is_same_v<T, PCons>) {
          hash_combine(seed, x.head.hash());
          hash_combine(seed, x.tail.hash());
          const auto& hv = x.head.variables();
          const auto& tv = x.tail.variables();
          std::vector<std::string> shared;
          std::set_intersection(hv.begin(), hv.end(), tv.begin(), tv.end(),
                                std::back_inserter(shared));
          if (!shared.empty()) {
            throw std::invalid_argument("non-linear pattern: variable " + shared.front() +
                                        " occurs more than once");
          }
          std::set_union(hv.begin(), hv.end(), tv.begin(), tv.end(),
                         std::back_inserter(node->vars));
        } else if constexpr (std::is_same_v<T, PVar>) {
          hash_mix(seed, x.name);
          node->vars.push_back(x.name);
        }
      },
      v);
  node->hash = seed;
  node->v = std::move(v);
  return Pattern(std::move(node));
}

Pattern::Pattern() : Pattern(nil()) {}
Pattern Pattern::integer(Integer i) { return make(std::move(i)); }
Pattern Pattern::atom(std::string name) { return make(Atom{std::move(name)}); }
Pattern Pattern::pid(Pid p) { return make(p); }
Pattern Pattern::nil() {
  static const Pattern empty = make(Nil{});
  return empty;
}
Pattern Pattern::cons(Pattern head, Pattern tail) {
  return make(PCons{std::move(head), std::move(tail)});
}
Pattern Pattern::var(std::string name) { return make(PVar{std::move(name)}); }

const Pattern::Variant& Pattern::variant() const { return node_->v; }
std::size_t Pattern::hash() const { return node_->hash; }
const std::vector<std::string>& Pattern::variables() const { return node_->vars; }

bool operator==(const Pattern& a, const Pattern& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return a.node_->v == b.node_->v;
}

// ---------------------------------------------------------------- Expr

Expr make_expr(Expr::Variant v) {
  auto node = std::make_shared<ExprNode>();
  std::size_t seed = v.index() * 0x9e3779b1ULL;
  std::vector<Name>& free = node->free;
  auto mix_expr = [&](const Expr& e) { hash_combine(seed, e.hash()); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Val>) {
          hash_combine(seed, x.value.hash());
          free = x.value.free_names();
        } else if constexpr (std::is_same_v<T, Var>) {
          hash_mix(seed, x.name);
          free.emplace_back(x.name);
        } else if constexpr (std::is_same_v<T, FunRef>) {
          hash_mix(seed, x.id.name);
          hash_mix(seed, x.id.arity);
          free.emplace_back(x.id);
        } else if constexpr (std::is_same_v<T, Apply> || std::is_same_v<T, Call>) {
          mix_expr(x.fn);
          free = x.fn.free_names();
          for (const auto& a : x.args) {
            mix_expr(a);
            free = set_union(free, a.free_names());
          }
        } else if constexpr (std::is_same_v<T, Case>) {
          mix_expr(x.scrutinee);
          hash_combine(seed, x.pattern.hash());
          mix_expr(x.then_branch);
          mix_expr(x.else_branch);
          std::vector<Name> then_free = x.then_branch.free_names();
          remove_names(then_free, as_names(x.pattern.variables()));
          free = set_union(set_union(x.scrutinee.free_names(), then_free),
                           x.else_branch.free_names());
        } else if constexpr (std::is_same_v<T, Let>) {
          hash_mix(seed, x.var);
          mix_expr(x.bound);
          mix_expr(x.body);
          std::vector<Name> body_free = x.body.free_names();
          remove_names(body_free, {Name{x.var}});
          free = set_union(x.bound.free_names(), body_free);
        } else if constexpr (std::is_same_v<T, ConsE>) {
          mix_expr(x.head);
          mix_expr(x.tail);
          free = set_union(x.head.free_names(), x.tail.free_names());
        } else if constexpr (std::is_same_v<T, Letrec>) {
          hash_mix(seed, x.id.name);
          hash_mix(seed, x.id.arity);
          for (const auto& p : x.params) hash_mix(seed, p);
          mix_expr(x.fun_body);
          mix_expr(x.body);
          std::vector<Name> body_free = x.body.free_names();
          remove_names(body_free, {Name{x.id}});
          free = set_union(fun_free(x.id, x.params, x.fun_body), body_free);
        } else if constexpr (std::is_same_v<T, Receive>) {
          for (const auto& c : x.clauses) {
            hash_combine(seed, c.pattern.hash());
            mix_expr(c.body);
            std::vector<Name> body_free = c.body.free_names();
            remove_names(body_free, as_names(c.pattern.variables()));
            free = set_union(free, body_free);
          }
        }
      },
      v);
  node->hash = seed;
  node->v = std::move(v);
  return Expr(std::move(node));
}

Expr::Expr() : Expr(val(Value::nil())) {}

const Expr::Variant& Expr::variant() const { return node_->v; }
std::size_t Expr::hash() const { return node_->hash; }
const std::vector<Name>& Expr::free_names() const { return node_->free; }

const Value* Expr::as_value() const {
  const auto* v = get_if<Val>();
  return v != nullptr ? &v->value : nullptr;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return a.node_->v == b.node_->v;
}

Expr val(Value v) { return make_expr(Val{std::move(v)}); }
Expr var(std::string name) { return make_expr(Var{std::move(name)}); }
Expr fun_ref(FunId id) { return make_expr(FunRef{std::move(id)}); }
Expr apply(Expr fn, std::vector<Expr> args) {
  return make_expr(Apply{std::move(fn), std::move(args)});
}
Expr call(Expr fn, std::vector<Expr> args) {
  return make_expr(Call{std::move(fn), std::move(args)});
}
Expr case_of(Expr scrutinee, Pattern pattern, Expr then_branch, Expr else_branch) {
  return make_expr(
      Case{std::move(scrutinee), std::move(pattern), std::move(then_branch), std::move(else_branch)});
}
Expr let(std::string var, Expr bound, Expr body) {
  return make_expr(Let{std::move(var), std::move(bound), std::move(body)});
}
Expr cons(Expr head, Expr tail) { return make_expr(ConsE{std::move(head), std::move(tail)}); }
Expr letrec(FunId id, std::vector<std::string> params, Expr fun_body, Expr body) {
  check_params(id, params);
  return make_expr(Letrec{std::move(id), std::move(params), std::move(fun_body), std::move(body)});
}
Expr receive(std::vector<Clause> clauses) {
  if (clauses.empty()) throw std::invalid_argument("receive needs at least one clause");
  return make_expr(Receive{std::move(clauses)});
}
Expr bif(std::string name, std::vector<Expr> args) {
  return call(val(Value::atom(std::move(name))), std::move(args));
}

// ---------------------------------------------------------------- Bindings

const Value* Bindings::find(const Name& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second;
}

Bindings Bindings::without(std::span<const Name> names) const {
  Bindings out = *this;
  for (const auto& n : names) out.map_.erase(n);
  return out;
}

Bindings Bindings::without(std::span<const std::string> vars) const {
  Bindings out = *this;
  for (const auto& v : vars) out.map_.erase(Name{v});
  return out;
}

Bindings Bindings::merged(const Bindings& other) const {
  Bindings out = *this;
  for (const auto& [k, v] : other.map_) out.map_.insert_or_assign(k, v);
  return out;
}

// ---------------------------------------------------------------- subst

namespace {

std::vector<Name> fun_binders(const FunId& id, const std::vector<std::string>& params) {
  std::vector<Name> names = as_names(params);
  names.emplace_back(id);
  return names;
}

}  // namespace

Value subst(const Value& v, const Bindings& b) {
  if (!intersects(v.free_names(), b)) return v;
  if (const auto* c = v.get_if<Cons>()) {
    return Value::cons(subst(c->head, b), subst(c->tail, b));
  }
  const auto& f = std::get<Fun>(v.variant());
  const std::vector<Name> binders = fun_binders(f.id, f.params);
  return Value::fun(f.id, f.params, subst(f.body, b.without(binders)));
}

Expr subst(const Expr& e, const Bindings& b) {
  if (!intersects(e.free_names(), b)) return e;
  auto list = [&](const std::vector<Expr>& es) {
    std::vector<Expr> out;
    out.reserve(es.size());
    for (const auto& x : es) out.push_back(subst(x, b));
    return out;
  };
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Val>) {
          return val(subst(x.value, b));
        } else if constexpr (std::is_same_v<T, Var>) {
          return val(*b.find(Name{x.name}));
        } else if constexpr (std::is_same_v<T, FunRef>) {
          return val(*b.find(Name{x.id}));
        } else if constexpr (std::is_same_v<T, Apply>) {
          return apply(subst(x.fn, b), list(x.args));
        } else if constexpr (std::is_same_v<T, Call>) {
          return call(subst(x.fn, b), list(x.args));
        } else if constexpr (std::is_same_v<T, Case>) {
          return case_of(subst(x.scrutinee, b), x.pattern,
                         subst(x.then_branch, b.without(std::span(x.pattern.variables()))),
                         subst(x.else_branch, b));
        } else if constexpr (std::is_same_v<T, Let>) {
          const std::string shadow[] = {x.var};
          return let(x.var, subst(x.bound, b), subst(x.body, b.without(std::span(shadow))));
        } else if constexpr (std::is_same_v<T, ConsE>) {
          return cons(subst(x.head, b), subst(x.tail, b));
        } else if constexpr (std::is_same_v<T, Letrec>) {
          const Name self[] = {Name{x.id}};
          return letrec(x.id, x.params,
                        subst(x.fun_body, b.without(fun_binders(x.id, x.params))),
                        subst(x.body, b.without(std::span(self))));
        } else {
          std::vector<Clause> clauses;
          clauses.reserve(x.clauses.size());
          for (const auto& c : x.clauses) {
            clauses.push_back(
                {c.pattern, subst(c.body, b.without(std::span(c.pattern.variables())))});
          }
          return receive(std::move(clauses));
        }
      },
      e.variant());
}

// ---------------------------------------------------------------- matching

namespace {

bool match_into(const Pattern& p, const Value& v, Bindings* out) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PVar>) {
          if (out != nullptr) out->bind(x.name, v);
          return true;
        } else if constexpr (std::is_same_v<T, PCons>) {
          const auto* c = v.get_if<Cons>();
          return c != nullptr && match_into(x.head, c->head, out) &&
                 match_into(x.tail, c->tail, out);
        } else {
          const auto* y = v.get_if<T>();
          return y != nullptr && *y == x;
        }
      },
      p.variant());
}

}  // namespace

bool is_match(const Pattern& p, const Value& v) { return match_into(p, v, nullptr); }

std::optional<Bindings> match_bind(const Pattern& p, const Value& v) {
  Bindings b;
  if (!match_into(p, v, &b)) return std::nullopt;
  return b;
}

std::optional<Value> instantiate(const Pattern& p, const Bindings& b) {
  return std::visit(
      [&](const auto& x) -> std::optional<Value> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PVar>) {
          const Value* v = b.find(x.name);
          if (v == nullptr) return std::nullopt;
          return *v;
        } else if constexpr (std::is_same_v<T, PCons>) {
          auto h = instantiate(x.head, b);
          auto t = instantiate(x.tail, b);
          if (!h || !t) return std::nullopt;
          return Value::cons(std::move(*h), std::move(*t));
        } else if constexpr (std::is_same_v<T, Integer>) {
          return Value::integer(x);
        } else if constexpr (std::is_same_v<T, Atom>) {
          return Value::atom(x.name);
        } else if constexpr (std::is_same_v<T, Pid>) {
          return Value::pid(x);
        } else {
          return Value::nil();
        }
      },
      p.variant());
}

std::optional<std::vector<Value>> list_to_meta(const Value& v) {
  std::vector<Value> out;
  const Value* cur = &v;
  while (const auto* c = cur->get_if<Cons>()) {
    out.push_back(c->head);
    cur = &c->tail;
  }
  if (!cur->is<Nil>()) return std::nullopt;
  return out;
}

Value bool_to_atom(bool b) { return Value::atom(b ? "true" : "false"); }

std::optional<bool> atom_to_bool(const Value& v) {
  if (v.is_atom("true")) return true;
  if (v.is_atom("false")) return false;
  return std::nullopt;
}

}  // namespace cerl
