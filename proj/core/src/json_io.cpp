#include "cerl/json_io.hpp"

#include <set>

#include "cerl/text.hpp"

namespace cerl {

namespace {

[[noreturn]] void bad(const std::string& what, const json& j) {
  std::string shown = j.dump();
  if (shown.size() > 80) shown = shown.substr(0, 77) + "...";
  throw ConfigError(what + ": " + shown);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'", j);
  return j.at(key);
}

std::string str_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_string()) bad(std::string("field '") + key + "' must be a string", j);
  return f.get<std::string>();
}

std::uint64_t uint_of(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer", j);
  }
  return j.get<std::uint64_t>();
}

Pid pid_of(const json& j) {
  if (j.is_string()) {
    Value v = value_from_json(j);
    if (const auto* p = v.get_if<Pid>()) return *p;
    bad("expected a pid", j);
  }
  return Pid{uint_of(j, "pid")};
}

bool bool_field(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& f = j.at(key);
  if (!f.is_boolean()) bad(std::string("field '") + key + "' must be a boolean", j);
  return f.get<bool>();
}

std::vector<std::string> names_of(const json& j) {
  if (!j.is_array()) bad("expected an array of variable names", j);
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) bad("expected a variable name", x);
    out.push_back(x.get<std::string>());
  }
  return out;
}

json exprs_to_json(const std::vector<Expr>& es) {
  json out = json::array();
  for (const auto& e : es) out.push_back(to_json(e));
  return out;
}

std::vector<Expr> exprs_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of expressions", j);
  std::vector<Expr> out;
  for (const auto& x : j) out.push_back(expr_from_json(x));
  return out;
}

json values_to_json(const std::vector<Value>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

std::vector<Value> values_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of values", j);
  std::vector<Value> out;
  for (const auto& x : j) out.push_back(value_from_json(x));
  return out;
}

template <class F>
auto guarded(const json& j, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ConfigError(std::string("syntax error in ") + j.dump() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    bad(e.what(), j);
  }
}

}  // namespace

// ---------------------------------------------------------------- values

json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return {{"int", x.str()}};
        } else if constexpr (std::is_same_v<T, Atom>) {
          return {{"atom", x.name}};
        } else if constexpr (std::is_same_v<T, Pid>) {
          return {{"pid", x.id}};
        } else if constexpr (std::is_same_v<T, Nil>) {
          return {{"nil", true}};
        } else if constexpr (std::is_same_v<T, Cons>) {
          return {{"cons", json::array({to_json(x.head), to_json(x.tail)})}};
        } else {
          return {{"fun",
                   {{"name", x.id.name},
                    {"arity", x.id.arity},
                    {"params", x.params},
                    {"body", to_json(x.body)}}}};
        }
      },
      v.variant());
}

Value value_from_json(const json& j) {
  if (j.is_string()) return guarded(j, [&] { return parse_value(j.get<std::string>()); });
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Value::integer(Integer(j.get<std::uint64_t>()))
                                  : Value::integer(Integer(j.get<std::int64_t>()));
  }
  if (!j.is_object() || j.size() != 1) bad("expected a value", j);
  const auto& [key, body] = *j.items().begin();
  if (key == "int") {
    if (body.is_number_integer()) return value_from_json(body);
    if (!body.is_string()) bad("integer must be a decimal string", j);
    return guarded(j, [&] {
      Value v = parse_value(body.get<std::string>());
      if (!v.is<Integer>()) throw std::invalid_argument("not an integer");
      return v;
    });
  }
  if (key == "atom") {
    if (!body.is_string()) bad("atom name must be a string", j);
    return Value::atom(body.get<std::string>());
  }
  if (key == "pid") return Value::pid(Pid{uint_of(body, "pid")});
  if (key == "nil") return Value::nil();
  if (key == "cons") {
    if (!body.is_array() || body.size() != 2) bad("cons must be [head, tail]", j);
    return Value::cons(value_from_json(body[0]), value_from_json(body[1]));
  }
  if (key == "fun") {
    return guarded(j, [&] {
      FunId id{str_field(body, "name"), static_cast<std::size_t>(uint_of(field(body, "arity"), "arity"))};
      return Value::fun(id, names_of(field(body, "params")), expr_from_json(field(body, "body")));
    });
  }
  bad("unknown value form", j);
}

// ---------------------------------------------------------------- patterns

json to_json(const Pattern& p) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return {{"int", x.str()}};
        } else if constexpr (std::is_same_v<T, Atom>) {
          return {{"atom", x.name}};
        } else if constexpr (std::is_same_v<T, Pid>) {
          return {{"pid", x.id}};
        } else if constexpr (std::is_same_v<T, Nil>) {
          return {{"nil", true}};
        } else if constexpr (std::is_same_v<T, PCons>) {
          return {{"cons", json::array({to_json(x.head), to_json(x.tail)})}};
        } else {
          return {{"var", x.name}};
        }
      },
      p.variant());
}

Pattern pattern_from_json(const json& j) {
  if (j.is_string()) return guarded(j, [&] { return parse_pattern(j.get<std::string>()); });
  if (!j.is_object() || j.size() != 1) bad("expected a pattern", j);
  const auto& [key, body] = *j.items().begin();
  if (key == "var") {
    if (!body.is_string()) bad("variable name must be a string", j);
    return Pattern::var(body.get<std::string>());
  }
  if (key == "cons") {
    if (!body.is_array() || body.size() != 2) bad("cons must be [head, tail]", j);
    return guarded(j, [&] { return Pattern::cons(pattern_from_json(body[0]), pattern_from_json(body[1])); });
  }
  if (key == "fun") bad("functions cannot appear in patterns", j);
  Value v = value_from_json(j);
  if (const auto* i = v.get_if<Integer>()) return Pattern::integer(*i);
  if (const auto* a = v.get_if<Atom>()) return Pattern::atom(a->name);
  if (const auto* p = v.get_if<Pid>()) return Pattern::pid(*p);
  return Pattern::nil();
}

// ---------------------------------------------------------------- expressions

json to_json(const Expr& e) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Val>) {
          return {{"val", to_json(x.value)}};
        } else if constexpr (std::is_same_v<T, Var>) {
          return {{"var", x.name}};
        } else if constexpr (std::is_same_v<T, FunRef>) {
          return {{"funref", {{"name", x.id.name}, {"arity", x.id.arity}}}};
        } else if constexpr (std::is_same_v<T, Apply>) {
          return {{"apply", {{"fn", to_json(x.fn)}, {"args", exprs_to_json(x.args)}}}};
        } else if constexpr (std::is_same_v<T, Call>) {
          return {{"call", {{"fn", to_json(x.fn)}, {"args", exprs_to_json(x.args)}}}};
        } else if constexpr (std::is_same_v<T, Case>) {
          return {{"case",
                   {{"scrutinee", to_json(x.scrutinee)},
                    {"pattern", to_json(x.pattern)},
                    {"then", to_json(x.then_branch)},
                    {"else", to_json(x.else_branch)}}}};
        } else if constexpr (std::is_same_v<T, Let>) {
          return {{"let", {{"var", x.var}, {"bound", to_json(x.bound)}, {"body", to_json(x.body)}}}};
        } else if constexpr (std::is_same_v<T, ConsE>) {
          return {{"cons", json::array({to_json(x.head), to_json(x.tail)})}};
        } else if constexpr (std::is_same_v<T, Letrec>) {
          return {{"letrec",
                   {{"name", x.id.name},
                    {"arity", x.id.arity},
                    {"params", x.params},
                    {"fun_body", to_json(x.fun_body)},
                    {"body", to_json(x.body)}}}};
        } else {
          json clauses = json::array();
          for (const auto& c : x.clauses) {
            clauses.push_back({{"pattern", to_json(c.pattern)}, {"body", to_json(c.body)}});
          }
          return {{"receive", clauses}};
        }
      },
      e.variant());
}

Expr expr_from_json(const json& j) {
  if (j.is_string()) return guarded(j, [&] { return parse_expr(j.get<std::string>()); });
  if (!j.is_object() || j.size() != 1) bad("expected an expression", j);
  const auto& [key, body] = *j.items().begin();
  return guarded(j, [&]() -> Expr {
    if (key == "val") return val(value_from_json(body));
    if (key == "var") {
      if (!body.is_string()) bad("variable name must be a string", j);
      return var(body.get<std::string>());
    }
    if (key == "funref") {
      return fun_ref({str_field(body, "name"),
                      static_cast<std::size_t>(uint_of(field(body, "arity"), "arity"))});
    }
    if (key == "apply") return apply(expr_from_json(field(body, "fn")), exprs_from_json(field(body, "args")));
    if (key == "call") return call(expr_from_json(field(body, "fn")), exprs_from_json(field(body, "args")));
    if (key == "case") {
      return case_of(expr_from_json(field(body, "scrutinee")), pattern_from_json(field(body, "pattern")),
                     expr_from_json(field(body, "then")), expr_from_json(field(body, "else")));
    }
    if (key == "let") {
      return let(str_field(body, "var"), expr_from_json(field(body, "bound")),
                 expr_from_json(field(body, "body")));
    }
    if (key == "cons") {
      if (!body.is_array() || body.size() != 2) bad("cons must be [head, tail]", j);
      return cons(expr_from_json(body[0]), expr_from_json(body[1]));
    }
    if (key == "letrec") {
      FunId id{str_field(body, "name"), static_cast<std::size_t>(uint_of(field(body, "arity"), "arity"))};
      return letrec(id, names_of(field(body, "params")), expr_from_json(field(body, "fun_body")),
                    expr_from_json(field(body, "body")));
    }
    if (key == "receive") {
      if (!body.is_array() || body.empty()) bad("receive needs a non-empty clause array", j);
      std::vector<Clause> clauses;
      for (const auto& c : body) {
        clauses.push_back({pattern_from_json(field(c, "pattern")), expr_from_json(field(c, "body"))});
      }
      return receive(std::move(clauses));
    }
    bad("unknown expression form", j);
  });
}

// ---------------------------------------------------------------- signals & actions

json to_json(const Signal& s) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Message>) {
          return {{"kind", "message"}, {"value", to_json(x.value)}};
        } else if constexpr (std::is_same_v<T, ExitSignal>) {
          return {{"kind", "exit"}, {"reason", to_json(x.reason)}, {"link", x.link}};
        } else if constexpr (std::is_same_v<T, LinkSignal>) {
          return {{"kind", "link"}};
        } else {
          return {{"kind", "unlink"}};
        }
      },
      s);
}

Signal signal_from_json(const json& j) {
  const std::string kind = str_field(j, "kind");
  if (kind == "message") return Message{value_from_json(field(j, "value"))};
  if (kind == "exit") return ExitSignal{value_from_json(field(j, "reason")), bool_field(j, "link", false)};
  if (kind == "link") return LinkSignal{};
  if (kind == "unlink") return UnlinkSignal{};
  bad("unknown signal kind", j);
}

json to_json(const Action& a) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SendAction>) {
          return {{"kind", "send"}, {"from", x.src.id}, {"to", x.dst.id}, {"signal", to_json(x.signal)}};
        } else if constexpr (std::is_same_v<T, ArriveAction>) {
          return {{"kind", "arrive"}, {"from", x.src.id}, {"to", x.dst.id}, {"signal", to_json(x.signal)}};
        } else if constexpr (std::is_same_v<T, ReceiveAction>) {
          return {{"kind", "receive"}, {"value", to_json(x.value)}};
        } else if constexpr (std::is_same_v<T, SelfAction>) {
          return {{"kind", "self"}, {"pid", x.pid.id}};
        } else if constexpr (std::is_same_v<T, SpawnAction>) {
          return {{"kind", "spawn"}, {"pid", x.pid.id}, {"fn", to_json(x.fn)}, {"args", to_json(x.args)}};
        } else if constexpr (std::is_same_v<T, TauAction>) {
          return {{"kind", "tau"}};
        } else if constexpr (std::is_same_v<T, TerminateAction>) {
          return {{"kind", "terminate"}};
        } else {
          return {{"kind", "flag"}};
        }
      },
      a);
}

Action action_from_json(const json& j) {
  const std::string kind = str_field(j, "kind");
  if (kind == "send") {
    return SendAction{pid_of(field(j, "from")), pid_of(field(j, "to")), signal_from_json(field(j, "signal"))};
  }
  if (kind == "arrive") {
    return ArriveAction{pid_of(field(j, "from")), pid_of(field(j, "to")), signal_from_json(field(j, "signal"))};
  }
  if (kind == "receive") return ReceiveAction{value_from_json(field(j, "value"))};
  if (kind == "self") return SelfAction{pid_of(field(j, "pid"))};
  if (kind == "spawn") {
    return SpawnAction{pid_of(field(j, "pid")), value_from_json(field(j, "fn")),
                       value_from_json(field(j, "args"))};
  }
  if (kind == "tau") return TauAction{};
  if (kind == "terminate") return TerminateAction{};
  if (kind == "flag") return FlagAction{};
  bad("unknown action kind", j);
}

json to_json(const Trace& t) {
  json out = json::array();
  for (const auto& step : t) {
    out.push_back({{"pid", step.pid.id}, {"action", to_json(step.action)}, {"text", print_action(step.action)}});
  }
  return out;
}

Trace trace_from_json(const json& j) {
  if (!j.is_array()) bad("a trace must be an array", j);
  Trace out;
  for (const auto& step : j) out.push_back({pid_of(field(step, "pid")), action_from_json(field(step, "action"))});
  return out;
}

// ---------------------------------------------------------------- frames

namespace {

json frame_to_json(const Frame& f) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CallFun>) {
          return {{"frame", "call_fun"}, {"args", exprs_to_json(x.args)}};
        } else if constexpr (std::is_same_v<T, CallArgs>) {
          return {{"frame", "call_args"}, {"fn", to_json(x.fn)}, {"done", values_to_json(x.done)},
                  {"todo", exprs_to_json(x.todo)}};
        } else if constexpr (std::is_same_v<T, ApplyFun>) {
          return {{"frame", "apply_fun"}, {"args", exprs_to_json(x.args)}};
        } else if constexpr (std::is_same_v<T, ApplyArgs>) {
          return {{"frame", "apply_args"}, {"fn", to_json(x.fn)}, {"done", values_to_json(x.done)},
                  {"todo", exprs_to_json(x.todo)}};
        } else if constexpr (std::is_same_v<T, LetFrame>) {
          return {{"frame", "let"}, {"var", x.var}, {"body", to_json(x.body)}};
        } else if constexpr (std::is_same_v<T, CaseFrame>) {
          return {{"frame", "case"}, {"pattern", to_json(x.pattern)}, {"then", to_json(x.then_branch)},
                  {"else", to_json(x.else_branch)}};
        } else if constexpr (std::is_same_v<T, ConsTail>) {
          return {{"frame", "cons_tail"}, {"head", to_json(x.head)}};
        } else {
          return {{"frame", "cons_head"}, {"tail", to_json(x.tail)}};
        }
      },
      f);
}

Frame frame_from_json(const json& j) {
  const std::string kind = str_field(j, "frame");
  if (kind == "call_fun") return CallFun{exprs_from_json(field(j, "args"))};
  if (kind == "call_args") {
    return CallArgs{value_from_json(field(j, "fn")), values_from_json(field(j, "done")),
                    exprs_from_json(field(j, "todo"))};
  }
  if (kind == "apply_fun") return ApplyFun{exprs_from_json(field(j, "args"))};
  if (kind == "apply_args") {
    return ApplyArgs{value_from_json(field(j, "fn")), values_from_json(field(j, "done")),
                     exprs_from_json(field(j, "todo"))};
  }
  if (kind == "let") return LetFrame{str_field(j, "var"), expr_from_json(field(j, "body"))};
  if (kind == "case") {
    return CaseFrame{pattern_from_json(field(j, "pattern")), expr_from_json(field(j, "then")),
                     expr_from_json(field(j, "else"))};
  }
  if (kind == "cons_tail") return ConsTail{expr_from_json(field(j, "head"))};
  if (kind == "cons_head") return ConsHead{value_from_json(field(j, "tail"))};
  bad("unknown frame kind", j);
}

}  // namespace

// ---------------------------------------------------------------- nodes

Node node_from_config(const json& doc) {
  if (!doc.is_object()) bad("a node configuration must be an object", doc);
  Node n;
  if (doc.contains("processes")) {
    const json& procs = doc.at("processes");
    if (!procs.is_array()) bad("'processes' must be an array", procs);
    for (const auto& p : procs) {
      const Pid pid = pid_of(field(p, "pid"));
      if (n.pool.contains(pid)) bad("duplicate pid", p);
      if (p.contains("dead")) {
        DeadProcess dead;
        if (!p.at("dead").is_array()) bad("'dead' must be an array", p);
        for (const auto& ob : p.at("dead")) {
          dead.obligations.emplace_back(pid_of(field(ob, "to")), value_from_json(field(ob, "reason")));
        }
        n.pool.emplace(pid, std::move(dead));
        continue;
      }
      LiveProcess live;
      live.redex = expr_from_json(field(p, "expr"));
      std::vector<Frame> frames;
      if (p.contains("stack")) {
        if (!p.at("stack").is_array()) bad("'stack' must be an array", p);
        for (const auto& f : p.at("stack")) frames.push_back(frame_from_json(f));
      }
      live.stack = FrameStack::from_frames(frames);
      if (p.contains("mailbox")) live.mailbox = values_from_json(p.at("mailbox"));
      if (p.contains("links")) {
        if (!p.at("links").is_array()) bad("'links' must be an array", p);
        for (const auto& l : p.at("links")) live.links.push_back(pid_of(l));
      }
      live.trap_exit = bool_field(p, "trap_exit", false);
      n.pool.emplace(pid, std::move(live));
    }
  }
  if (doc.contains("ether")) {
    const json& ether = doc.at("ether");
    if (!ether.is_array()) bad("'ether' must be an array", ether);
    for (const auto& q : ether) {
      const Pid from = pid_of(field(q, "from"));
      const Pid to = pid_of(field(q, "to"));
      const json& signals = field(q, "signals");
      if (!signals.is_array()) bad("'signals' must be an array", q);
      for (const auto& s : signals) n.ether = n.ether.push(from, to, signal_from_json(s));
    }
  }
  return n;
}

json node_to_config(const Node& n) {
  json procs = json::array();
  for (const auto& [pid, p] : n.pool) {
    if (const auto* live = std::get_if<LiveProcess>(&p)) {
      json entry = {{"pid", pid.id}, {"expr", to_json(live->redex)}};
      if (!live->stack.empty()) {
        json frames = json::array();
        for (const auto& f : live->stack.frames()) frames.push_back(frame_to_json(f));
        entry["stack"] = frames;
      }
      if (!live->mailbox.empty()) entry["mailbox"] = values_to_json(live->mailbox);
      if (!live->links.empty()) {
        json links = json::array();
        for (Pid l : live->links) links.push_back(l.id);
        entry["links"] = links;
      }
      if (live->trap_exit) entry["trap_exit"] = true;
      procs.push_back(entry);
    } else {
      json obs = json::array();
      for (const auto& [to, reason] : std::get<DeadProcess>(p).obligations) {
        obs.push_back({{"to", to.id}, {"reason", to_json(reason)}});
      }
      procs.push_back({{"pid", pid.id}, {"dead", obs}});
    }
  }
  json ether = json::array();
  for (const auto& [key, q] : n.ether.queues()) {
    json signals = json::array();
    for (const auto& s : q) signals.push_back(to_json(s));
    ether.push_back({{"from", key.first.id}, {"to", key.second.id}, {"signals", signals}});
  }
  return {{"processes", procs}, {"ether", ether}};
}

json render_node(const Node& n) {
  json procs = json::array();
  for (const auto& [pid, p] : n.pool) {
    if (const auto* live = std::get_if<LiveProcess>(&p)) {
      json stack = json::array();
      for (const auto& f : live->stack.frames()) stack.push_back(print_frame(f));
      json mailbox = json::array();
      for (const auto& v : live->mailbox) mailbox.push_back(print(v));
      json links = json::array();
      for (Pid l : live->links) links.push_back(l.id);
      procs.push_back({{"pid", pid.id},
                       {"status", "live"},
                       {"stack", stack},
                       {"stack_depth", live->stack.size()},
                       {"redex", print(live->redex)},
                       {"mailbox", mailbox},
                       {"links", links},
                       {"trap_exit", live->trap_exit}});
    } else {
      json obs = json::array();
      for (const auto& [to, reason] : std::get<DeadProcess>(p).obligations) {
        obs.push_back({{"to", to.id}, {"reason", print(reason)}});
      }
      procs.push_back({{"pid", pid.id}, {"status", "dead"}, {"obligations", obs}});
    }
  }
  json ether = json::array();
  for (const auto& [key, q] : n.ether.queues()) {
    json signals = json::array();
    for (const auto& s : q) signals.push_back(print_signal(s));
    ether.push_back({{"from", key.first.id}, {"to", key.second.id}, {"signals", signals}});
  }
  return {{"processes", procs}, {"ether", ether}};
}

json lts_to_json(const Lts& lts) {
  json states = json::array();
  for (std::size_t i = 0; i < lts.size(); ++i) {
    states.push_back({{"id", i}, {"depth", lts.depth(i)}, {"node", render_node(lts.state(i))}});
  }
  json edges = json::array();
  for (const auto& e : lts.edges()) {
    edges.push_back({{"from", e.from},
                     {"pid", e.pid.id},
                     {"action", to_json(e.action)},
                     {"text", print_action(e.action)},
                     {"to", e.to}});
  }
  return {{"initial", Lts::initial},
          {"states", states},
          {"edges", edges},
          {"truncated", lts.truncated_states()}};
}

json report_to_json(const BisimReport& r, const Lts& left, const Lts& right) {
  json out = {{"verdict", verdict_name(r.verdict)}};
  if (r.failure) {
    const UnmatchedMove& f = *r.failure;
    out["failure"] = {{"pair", {f.pair.first, f.pair.second}},
                      {"side", f.left_moves ? "left" : "right"},
                      {"pid", f.pid.id},
                      {"action", to_json(f.action)},
                      {"text", print_action(f.action)},
                      {"target", f.target},
                      {"reason", f.reason},
                      {"left_trace", to_json(left.trace_to(f.pair.first))},
                      {"right_trace", to_json(right.trace_to(f.pair.second))}};
  }
  json unknown = json::array();
  for (const auto& [i, j] : r.unknown) unknown.push_back({i, j});
  out["unknown"] = unknown;
  json pairs = json::array();
  for (const auto& [i, j] : r.witness) pairs.push_back({i, j});
  out["witness"] = {{"pairs", pairs}};
  return out;
}

}  // namespace cerl
