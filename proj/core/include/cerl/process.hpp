#pragma once

// Process-local semantics: signals, actions, processes and the labelled
// relation p -a-> p'.

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cerl/seq.hpp"
#include "cerl/syntax.hpp"

namespace cerl {

struct Message {
  Value value;
  friend bool operator==(const Message&, const Message&) = default;
};
struct ExitSignal {
  Value reason;
  /// true when the signal travels through a link (sent by a dead process).
  bool link = false;
  friend bool operator==(const ExitSignal&, const ExitSignal&) = default;
};
struct LinkSignal {
  friend bool operator==(const LinkSignal&, const LinkSignal&) = default;
};
struct UnlinkSignal {
  friend bool operator==(const UnlinkSignal&, const UnlinkSignal&) = default;
};

using Signal = std::variant<Message, ExitSignal, LinkSignal, UnlinkSignal>;

std::size_t hash_signal(const Signal& s);

struct SendAction {
  Pid src;
  Pid dst;
  Signal signal;
  friend bool operator==(const SendAction&, const SendAction&) = default;
};
struct ArriveAction {
  Pid src;
  Pid dst;
  Signal signal;
  friend bool operator==(const ArriveAction&, const ArriveAction&) = default;
};
struct ReceiveAction {
  Value value;
  friend bool operator==(const ReceiveAction&, const ReceiveAction&) = default;
};
struct SelfAction {
  Pid pid;
  friend bool operator==(const SelfAction&, const SelfAction&) = default;
};
struct SpawnAction {
  Pid pid;
  Value fn;
  Value args;
  friend bool operator==(const SpawnAction&, const SpawnAction&) = default;
};
struct TauAction {
  friend bool operator==(const TauAction&, const TauAction&) = default;
};
struct TerminateAction {
  friend bool operator==(const TerminateAction&, const TerminateAction&) = default;
};
struct FlagAction {
  friend bool operator==(const FlagAction&, const FlagAction&) = default;
};

using Action = std::variant<SendAction, ArriveAction, ReceiveAction, SelfAction, SpawnAction,
                            TauAction, TerminateAction, FlagAction>;

std::size_t hash_action(const Action& a);
inline bool is_tau(const Action& a) { return std::holds_alternative<TauAction>(a); }

using Mailbox = std::vector<Value>;

struct LiveProcess {
  FrameStack stack;
  Expr redex;
  Mailbox mailbox;
  std::vector<Pid> links;
  bool trap_exit = false;
  friend bool operator==(const LiveProcess&, const LiveProcess&) = default;
};

/// A terminated process that still owes exit signals to its former links.
struct DeadProcess {
  std::vector<std::pair<Pid, Value>> obligations;
  friend bool operator==(const DeadProcess&, const DeadProcess&) = default;
};

using Process = std::variant<LiveProcess, DeadProcess>;

std::size_t hash_process(const Process& p);

/// A fresh process evaluating `e` with empty mailbox, no links and trap_exit off.
Process make_process(Expr e);

struct DropSignal {
  friend bool operator==(const DropSignal&, const DropSignal&) = default;
};
struct TerminateWith {
  Value reason;
  friend bool operator==(const TerminateWith&, const TerminateWith&) = default;
};
struct ConvertToMessage {
  friend bool operator==(const ConvertToMessage&, const ConvertToMessage&) = default;
};
struct NoRule {
  friend bool operator==(const NoRule&, const NoRule&) = default;
};

using ExitOutcome = std::variant<DropSignal, TerminateWith, ConvertToMessage, NoRule>;

/// What happens when an exit signal from `src` with `reason` arrives at
/// process `self`.
ExitOutcome exit_decision(bool trap, const Value& reason, bool link_flag, Pid src, Pid self,
                          const std::vector<Pid>& links);

/// The mailbox entry an exit signal turns into when trapped: ['EXIT', src, reason].
Value exit_message(Pid src, const Value& reason);

struct ReceiveChoice {
  std::size_t clause = 0;
  std::size_t position = 0;  // index of the message in the mailbox
  Value message;
  Bindings bindings;
};

/// Oldest message matching any clause; the first matching clause wins.
std::optional<ReceiveChoice> receive_select(const Mailbox& q, const std::vector<Clause>& clauses);

/// One process-local step, or nullopt when the action is not enabled.
std::optional<Process> local_apply(const Process& p, const Action& a);

/// Every non-arrival action enabled for `p`. The node layer supplies the
/// process' own pid and the pid a spawn would receive.
std::vector<Action> local_enabled(const Process& p, Pid self, Pid spawn_pid);

/// All elements except those equal to `x`.
std::vector<Pid> remove_all(const std::vector<Pid>& xs, Pid x);

}  // namespace cerl
