#pragma once

// Object language: values, patterns and expressions of the concurrent
// Core Erlang subset, together with substitution and pattern matching.
//
// All terms are immutable and reference counted. Each node caches its hash
// and the set of names occurring free in it, so equality checks and
// substitution can skip untouched subtrees.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cerl {

using Integer = boost::multiprecision::cpp_int;

struct Atom {
  std::string name;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Pid {
  std::uint64_t id = 0;

  friend bool operator==(const Pid&, const Pid&) = default;
  friend auto operator<=>(const Pid&, const Pid&) = default;
};

/// Function identifier `f/k`.
struct FunId {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const FunId&, const FunId&) = default;
  friend auto operator<=>(const FunId&, const FunId&) = default;
};

/// Anything a binder can introduce: a variable or a function identifier.
using Name = std::variant<std::string, FunId>;

struct Nil {
  friend bool operator==(const Nil&, const Nil&) = default;
};

struct Cons;
struct Fun;
struct PCons;
struct PVar;
struct Val;
struct Var;
struct FunRef;
struct Apply;
struct Call;
struct Case;
struct Let;
struct ConsE;
struct Letrec;
struct Receive;

struct ExprNode;
struct ValueNode;
struct PatternNode;

class Expr {
 public:
  using Variant =
      std::variant<Val, Var, FunRef, Apply, Call, Case, Let, ConsE, Letrec, Receive>;

  /// Defaults to the value `[]`.
  Expr();

  const Variant& variant() const;
  template <class T>
  const T* get_if() const;
  template <class T>
  bool is() const;

  /// The wrapped value when this is `Val`, otherwise nullptr.
  const class Value* as_value() const;

  std::size_t hash() const;
  /// Sorted, duplicate-free.
  const std::vector<Name>& free_names() const;
  bool closed() const { return free_names().empty(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend Expr make_expr(Variant v);
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

class Value {
 public:
  using Variant = std::variant<Integer, Atom, Pid, Nil, Cons, Fun>;

  /// Defaults to `[]`.
  Value();

  static Value integer(Integer i);
  static Value atom(std::string name);
  static Value pid(Pid p);
  static Value nil();
  static Value cons(Value head, Value tail);
  /// Throws std::invalid_argument when params.size() != id.arity or a
  /// parameter name repeats.
  static Value fun(FunId id, std::vector<std::string> params, Expr body);
  /// Proper list (or improper when `tail` is not `[]`).
  static Value list(std::span<const Value> items, Value tail = Value::nil());

  const Variant& variant() const;
  template <class T>
  const T* get_if() const;
  template <class T>
  bool is() const;
  bool is_atom(std::string_view name) const;

  std::size_t hash() const;
  const std::vector<Name>& free_names() const;
  bool closed() const { return free_names().empty(); }

  friend bool operator==(const Value& a, const Value& b);

 private:
  explicit Value(std::shared_ptr<const ValueNode> node) : node_(std::move(node)) {}
  static Value make(Variant v);
  std::shared_ptr<const ValueNode> node_;
};

class Pattern {
 public:
  using Variant = std::variant<Integer, Atom, Pid, Nil, PCons, PVar>;

  Pattern();

  static Pattern integer(Integer i);
  static Pattern atom(std::string name);
  static Pattern pid(Pid p);
  static Pattern nil();
  /// Throws std::invalid_argument when head and tail share a variable.
  static Pattern cons(Pattern head, Pattern tail);
  static Pattern var(std::string name);

  const Variant& variant() const;
  template <class T>
  const T* get_if() const;

  std::size_t hash() const;
  /// Variables bound by the pattern, sorted.
  const std::vector<std::string>& variables() const;

  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  explicit Pattern(std::shared_ptr<const PatternNode> node) : node_(std::move(node)) {}
  static Pattern make(Variant v);
  std::shared_ptr<const PatternNode> node_;
};

struct Cons {
  Value head;
  Value tail;
  friend bool operator==(const Cons&, const Cons&) = default;
};

struct Fun {
  FunId id;
  std::vector<std::string> params;
  Expr body;
  friend bool operator==(const Fun&, const Fun&) = default;
};

struct PCons {
  Pattern head;
  Pattern tail;
  friend bool operator==(const PCons&, const PCons&) = default;
};

struct PVar {
  std::string name;
  friend bool operator==(const PVar&, const PVar&) = default;
};

struct Val {
  Value value;
  friend bool operator==(const Val&, const Val&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
struct FunRef {
  FunId id;
  friend bool operator==(const FunRef&, const FunRef&) = default;
};
struct Apply {
  Expr fn;
  std::vector<Expr> args;
  friend bool operator==(const Apply&, const Apply&) = default;
};
/// BIF call `call e(e1, ..., ek)`.
struct Call {
  Expr fn;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&) = default;
};
/// Two-branch case: `case e of p then e1 else e2 end`.
struct Case {
  Expr scrutinee;
  Pattern pattern;
  Expr then_branch;
  Expr else_branch;
  friend bool operator==(const Case&, const Case&) = default;
};
struct Let {
  std::string var;
  Expr bound;
  Expr body;
  friend bool operator==(const Let&, const Let&) = default;
};
struct ConsE {
  Expr head;
  Expr tail;
  friend bool operator==(const ConsE&, const ConsE&) = default;
};
/// `letrec f/k = fun(params) -> fun_body in body`
struct Letrec {
  FunId id;
  std::vector<std::string> params;
  Expr fun_body;
  Expr body;
  friend bool operator==(const Letrec&, const Letrec&) = default;
};
struct Clause {
  Pattern pattern;
  Expr body;
  friend bool operator==(const Clause&, const Clause&) = default;
};
struct Receive {
  std::vector<Clause> clauses;
  friend bool operator==(const Receive&, const Receive&) = default;
};

// Accessors are defined once all alternatives are complete.
template <class T>
const T* Expr::get_if() const {
  return std::get_if<T>(&variant());
}
template <class T>
bool Expr::is() const {
  return std::holds_alternative<T>(variant());
}
template <class T>
const T* Value::get_if() const {
  return std::get_if<T>(&variant());
}
template <class T>
bool Value::is() const {
  return std::holds_alternative<T>(variant());
}
template <class T>
const T* Pattern::get_if() const {
  return std::get_if<T>(&variant());
}

// Expression constructors. `fun_value`/`letrec` validate arity and parameter
// distinctness; `receive` requires at least one clause.
Expr val(Value v);
Expr var(std::string name);
Expr fun_ref(FunId id);
Expr apply(Expr fn, std::vector<Expr> args);
Expr call(Expr fn, std::vector<Expr> args);
Expr case_of(Expr scrutinee, Pattern pattern, Expr then_branch, Expr else_branch);
Expr let(std::string var, Expr bound, Expr body);
Expr cons(Expr head, Expr tail);
Expr letrec(FunId id, std::vector<std::string> params, Expr fun_body, Expr body);
Expr receive(std::vector<Clause> clauses);

/// `call 'name'(args...)`
Expr bif(std::string name, std::vector<Expr> args);

/// Simultaneous substitution map from names to values.
class Bindings {
 public:
  Bindings() = default;

  void bind(const std::string& var, Value v) { map_.insert_or_assign(Name{var}, std::move(v)); }
  void bind(const FunId& id, Value v) { map_.insert_or_assign(Name{id}, std::move(v)); }
  void bind(const Name& name, Value v) { map_.insert_or_assign(name, std::move(v)); }

  const Value* find(const Name& name) const;
  const Value* find(const std::string& var) const { return find(Name{var}); }
  bool contains(const Name& name) const { return map_.contains(name); }

  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

  /// Copy without the given names (used when descending under binders).
  Bindings without(std::span<const Name> names) const;
  Bindings without(std::span<const std::string> vars) const;

  /// Union; on overlap `other` wins.
  Bindings merged(const Bindings& other) const;

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Bindings&, const Bindings&) = default;

 private:
  std::map<Name, Value> map_;
};

/// Capture-avoiding simultaneous substitution. Binders shadow: let variables,
/// fun parameters and identifiers, letrec identifiers and parameters, and
/// pattern variables in their clause bodies.
Expr subst(const Expr& e, const Bindings& b);
Value subst(const Value& v, const Bindings& b);

bool is_match(const Pattern& p, const Value& v);

/// Bindings for exactly the variables of `p`, or nullopt when `v` does not
/// match.
std::optional<Bindings> match_bind(const Pattern& p, const Value& v);

/// Rebuilds a value from a pattern by looking its variables up in `b`.
/// nullopt when a variable is missing.
std::optional<Value> instantiate(const Pattern& p, const Bindings& b);

/// The elements of a proper list; nullopt for improper lists and non-lists.
std::optional<std::vector<Value>> list_to_meta(const Value& v);

Value bool_to_atom(bool b);
/// 'true' -> true, 'false' -> false, anything else -> nullopt.
std::optional<bool> atom_to_bool(const Value& v);

}  // namespace cerl

template <>
struct std::hash<cerl::Value> {
  std::size_t operator()(const cerl::Value& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<cerl::Expr> {
  std::size_t operator()(const cerl::Expr& e) const noexcept { return e.hash(); }
};
template <>
struct std::hash<cerl::Pid> {
  std::size_t operator()(const cerl::Pid& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.id);
  }
};
