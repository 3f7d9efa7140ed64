#pragma once

// Frame-stack sequential semantics. A configuration is a pair of a frame
// stack (the continuation) and the expression under reduction.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cerl/syntax.hpp"

namespace cerl {

/// call □(e1, ..., ek)
struct CallFun {
  std::vector<Expr> args;
  friend bool operator==(const CallFun&, const CallFun&) = default;
};
/// call v(v1, ..., □, ..., ek)
struct CallArgs {
  Value fn;
  std::vector<Value> done;
  std::vector<Expr> todo;
  friend bool operator==(const CallArgs&, const CallArgs&) = default;
};
/// apply □(e1, ..., ek)
struct ApplyFun {
  std::vector<Expr> args;
  friend bool operator==(const ApplyFun&, const ApplyFun&) = default;
};
/// apply v(v1, ..., □, ..., ek)
struct ApplyArgs {
  Value fn;
  std::vector<Value> done;
  std::vector<Expr> todo;
  friend bool operator==(const ApplyArgs&, const ApplyArgs&) = default;
};
/// let x = □ in e
struct LetFrame {
  std::string var;
  Expr body;
  friend bool operator==(const LetFrame&, const LetFrame&) = default;
};
/// case □ of p then e1 else e2 end
struct CaseFrame {
  Pattern pattern;
  Expr then_branch;
  Expr else_branch;
  friend bool operator==(const CaseFrame&, const CaseFrame&) = default;
};
/// [e | □]
struct ConsTail {
  Expr head;
  friend bool operator==(const ConsTail&, const ConsTail&) = default;
};
/// [□ | v]
struct ConsHead {
  Value tail;
  friend bool operator==(const ConsHead&, const ConsHead&) = default;
};

using Frame =
    std::variant<CallFun, CallArgs, ApplyFun, ApplyArgs, LetFrame, CaseFrame, ConsTail, ConsHead>;

std::size_t hash_frame(const Frame& f);

/// Persistent stack of frames; the empty stack is the identity continuation.
class FrameStack {
 public:
  FrameStack() = default;

  bool empty() const { return cell_ == nullptr; }
  std::size_t size() const;
  /// Precondition: !empty().
  const Frame& top() const;
  /// Precondition: !empty().
  const FrameStack& pop() const;
  FrameStack push(Frame f) const;

  std::vector<Frame> frames() const;  // top first
  static FrameStack from_frames(const std::vector<Frame>& top_first);

  std::size_t hash() const;
  friend bool operator==(const FrameStack& a, const FrameStack& b);

 private:
  struct Cell;
  explicit FrameStack(std::shared_ptr<const Cell> c) : cell_(std::move(c)) {}
  std::shared_ptr<const Cell> cell_;
};

/// Which group of sequential rules produced a step.
enum class SeqRule {
  Push,    // extract the first redex and push a frame
  Shift,   // plug a value into the top frame and continue in the same frame
  Pop,     // consume the top frame
  Letrec,  // in-place letrec substitution
};

struct SeqStep {
  FrameStack stack;
  Expr redex;
  SeqRule rule;
};

/// One sequential reduction step; nullopt when no sequential rule applies.
std::optional<SeqStep> seq_step_tagged(const FrameStack& k, const Expr& e);
std::optional<std::pair<FrameStack, Expr>> seq_step(const FrameStack& k, const Expr& e);

// Shapes of configurations where a concurrent BIF is ready to fire. The
// stack `rest` is the continuation below the BIF frame.
struct SendShape {
  Pid target;
  Value payload;
  friend bool operator==(const SendShape&, const SendShape&) = default;
};
struct Exit2Shape {
  Pid target;
  Value reason;
  friend bool operator==(const Exit2Shape&, const Exit2Shape&) = default;
};
struct Exit1Shape {
  Value reason;
  friend bool operator==(const Exit1Shape&, const Exit1Shape&) = default;
};
struct LinkShape {
  Pid target;
  friend bool operator==(const LinkShape&, const LinkShape&) = default;
};
struct UnlinkShape {
  Pid target;
  friend bool operator==(const UnlinkShape&, const UnlinkShape&) = default;
};
struct SelfShape {
  friend bool operator==(const SelfShape&, const SelfShape&) = default;
};
struct SpawnShape {
  Value fn;
  Value args;
  friend bool operator==(const SpawnShape&, const SpawnShape&) = default;
};
struct FlagShape {
  Value value;
  friend bool operator==(const FlagShape&, const FlagShape&) = default;
};

using DispatchShape = std::variant<SendShape, Exit2Shape, Exit1Shape, LinkShape, UnlinkShape,
                                   SelfShape, SpawnShape, FlagShape>;

struct TauRedex {
  friend bool operator==(const TauRedex&, const TauRedex&) = default;
};
struct FinalValue {
  Value value;
  friend bool operator==(const FinalValue&, const FinalValue&) = default;
};
struct ReceiveRedex {
  friend bool operator==(const ReceiveRedex&, const ReceiveRedex&) = default;
};
struct ConcDispatch {
  Atom bif;
  DispatchShape shape;
  FrameStack rest;
  friend bool operator==(const ConcDispatch&, const ConcDispatch&) = default;
};
struct Stuck {
  std::string reason;
  friend bool operator==(const Stuck&, const Stuck&) = default;
};

using RedexClass = std::variant<TauRedex, FinalValue, ReceiveRedex, ConcDispatch, Stuck>;

RedexClass classify_redex(const FrameStack& k, const Expr& e);

struct Finished {
  Value value;
};
struct Suspended {
  FrameStack stack;
  Expr redex;
  RedexClass cls;
};
struct OutOfFuel {
  FrameStack stack;
  Expr redex;
};
using SeqOutcome = std::variant<Finished, Suspended, OutOfFuel>;

/// Iterates seq_step at most `fuel` times.
SeqOutcome seq_eval(const FrameStack& k, const Expr& e, std::size_t fuel);

}  // namespace cerl
