// Command line front end: evaluation, trace replay, exploration, equivalence
// checking, property suites and the session server.
//
// Exit codes: 0 success, 1 negative answer (stuck, failed replay, FailsAt,
// failing property), 2 undecided (out of fuel, UnknownAtBound), 3 bad input.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cerl/equivalence.hpp"
#include "cerl/json_io.hpp"
#include "cerl/props.hpp"
#include "cerl/session.hpp"
#include "cerl/text.hpp"
#include "http_server.hpp"

namespace {

using namespace cerl;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUndecided = 2;
constexpr int kBadInput = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw InputError(path + ": not valid JSON");
  return doc;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// A node configuration file, or a program file run as process #1.
Node load_node(const std::string& path) {
  if (has_suffix(path, ".cerl")) return make_node({{Pid{1}, parse_expr(read_file(path))}});
  return node_from_config(read_json(path));
}

std::string pid_text(Pid p) { return "#" + std::to_string(p.id); }

std::string trace_text(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += "  " + std::to_string(i) + "  " + pid_text(t[i].pid) + "  " + print_action(t[i].action) + "\n";
  }
  return out;
}

struct Globals {
  bool json = false;
};

void emit(const Globals& g, const json& doc, const std::string& text) {
  if (g.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

// ---------------------------------------------------------------- commands

struct EvalArgs {
  std::string file;
  std::size_t fuel = 100000;
};

int cmd_eval(const Globals& g, const EvalArgs& a) {
  Expr e = parse_expr(read_file(a.file));
  SeqOutcome out = seq_eval({}, e, a.fuel);
  if (const auto* f = std::get_if<Finished>(&out)) {
    emit(g, {{"outcome", "finished"}, {"value", print(f->value)}, {"term", to_json(f->value)}},
         print(f->value) + "\n");
    return kOk;
  }
  if (const auto* o = std::get_if<OutOfFuel>(&out)) {
    emit(g, {{"outcome", "out_of_fuel"}, {"redex", print(o->redex)}},
         "out of fuel at " + print(o->redex) + "\n");
    return kUndecided;
  }
  const auto& s = std::get<Suspended>(out);
  std::string what;
  std::string kind = "suspended";
  if (const auto* st = std::get_if<Stuck>(&s.cls)) {
    kind = "stuck";
    what = st->reason;
  } else if (std::holds_alternative<ReceiveRedex>(s.cls)) {
    what = "waiting in receive";
  } else if (const auto* d = std::get_if<ConcDispatch>(&s.cls)) {
    what = "concurrent call " + print_atom(d->bif.name);
  }
  emit(g, {{"outcome", kind}, {"detail", what}, {"redex", print(s.redex)}},
       kind + ": " + what + " at " + print(s.redex) + "\n");
  return kNegative;
}

struct RunArgs {
  std::string node;
  std::string trace;
};

int cmd_run(const Globals& g, const RunArgs& a) {
  Node start = load_node(a.node);
  Trace trace = trace_from_json(read_json(a.trace));
  Replay r = run_trace(start, trace);
  if (!r.ok()) {
    const auto& step = trace[*r.failed_at];
    emit(g,
         {{"ok", false}, {"failed_at", *r.failed_at}, {"step", to_json(Trace{step})[0]},
          {"node", render_node(r.node)}},
         "step " + std::to_string(*r.failed_at) + " is not enabled: " + pid_text(step.pid) + " " +
             print_action(step.action) + "\n" + print_node(r.node));
    return kNegative;
  }
  emit(g, {{"ok", true}, {"steps", trace.size()}, {"node", render_node(r.node)}, {"config", node_to_config(r.node)}},
       "replayed " + std::to_string(trace.size()) + " steps\n" + print_node(r.node));
  return kOk;
}

struct ExploreArgs {
  std::string node;
  ExplorationConfig cfg;
  std::string lts_out;
};

int cmd_explore(const Globals& g, const ExploreArgs& a) {
  Node start = load_node(a.node);
  const auto t0 = std::chrono::steady_clock::now();
  Lts lts = explore(start, a.cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!a.lts_out.empty()) write_file(a.lts_out, lts_to_json(lts).dump(1) + "\n");

  const auto finals = final_values(lts);
  const auto terminal = lts.terminal_states();
  const auto truncated = lts.truncated_states();
  json fv = json::object();
  std::string text = "states " + std::to_string(lts.size()) + ", edges " +
                     std::to_string(lts.edges().size()) + ", truncated " +
                     std::to_string(truncated.size()) + (lts.complete() ? " (complete)" : " (bounded)") +
                     "\nterminal states " + std::to_string(terminal.size()) + "\nfinal values\n";
  for (const auto& [pid, values] : finals) {
    json vs = json::array();
    text += "  " + pid_text(pid) + ":";
    for (std::size_t i = 0; i < values.size(); ++i) {
      vs.push_back(print(values[i]));
      text += (i ? ", " : " ") + print(values[i]);
    }
    text += "\n";
    fv[std::to_string(pid.id)] = vs;
  }
  emit(g,
       {{"states", lts.size()},
        {"edges", lts.edges().size()},
        {"truncated", truncated},
        {"complete", lts.complete()},
        {"terminal", terminal},
        {"final_values", fv},
        {"seconds", secs}},
       text);
  return kOk;
}

struct EquivArgs {
  std::string left;
  std::string right;
  ExplorationConfig cfg;
  std::string witness_out;
};

int cmd_check_equiv(const Globals& g, const EquivArgs& a) {
  Node l = load_node(a.left);
  Node r = load_node(a.right);
  WeakResult res = weakly_bisimilar(l, r, a.cfg);
  const BisimReport& rep = res.report;
  json doc = report_to_json(rep, res.left, res.right);
  doc["left_states"] = res.left.size();
  doc["right_states"] = res.right.size();
  if (!a.witness_out.empty()) write_file(a.witness_out, doc["witness"].dump(1) + "\n");

  std::string text = std::string(verdict_name(rep.verdict)) + " (" + std::to_string(res.left.size()) +
                     " x " + std::to_string(res.right.size()) + " states)\n";
  if (rep.failure) {
    const auto& f = *rep.failure;
    text += (f.left_moves ? "left" : "right") + std::string(" move ") + pid_text(f.pid) + " " +
            print_action(f.action) + " is unmatched: " + f.reason + "\nleft trace\n" +
            trace_text(res.left.trace_to(f.pair.first)) + "right trace\n" +
            trace_text(res.right.trace_to(f.pair.second));
  }
  if (rep.verdict == Verdict::Holds) text += "witness relation of " + std::to_string(rep.witness.size()) + " pairs\n";
  if (rep.verdict == Verdict::UnknownAtBound) {
    text += std::to_string(rep.unknown.size()) + " pairs depend on truncated states\n";
  }
  emit(g, doc, text);
  switch (rep.verdict) {
    case Verdict::Holds:
      return kOk;
    case Verdict::FailsAt:
      return kNegative;
    default:
      return kUndecided;
  }
}

int cmd_props(const Globals& g, const PropsConfig& cfg) {
  auto results = run_all_properties(cfg);
  json doc = json::array();
  std::string text;
  bool all = true;
  for (const auto& r : results) {
    all = all && r.ok();
    doc.push_back({{"name", r.name},
                   {"cases", r.cases},
                   {"failures", r.failures},
                   {"samples", r.samples},
                   {"note", r.note},
                   {"seconds", r.seconds}});
    std::ostringstream line;
    line << (r.ok() ? "ok    " : "FAIL  ") << r.name << ": " << r.cases << " cases, " << r.failures
         << " failures";
    if (!r.note.empty()) line << " (" << r.note << ")";
    text += line.str() + "\n";
    for (const auto& s : r.samples) text += "      " + s + "\n";
  }
  emit(g, doc, text);
  return all ? kOk : kNegative;
}

struct FindArgs {
  std::string node;
  std::uint64_t pid = 0;
  std::string value;
  ExplorationConfig cfg;
  std::string out;
};

int cmd_find(const Globals& g, const FindArgs& a) {
  Node start = load_node(a.node);
  const Value want = parse_value(a.value);
  Lts lts = explore(start, a.cfg);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < lts.size(); ++i) {
    auto it = lts.state(i).pool.find(Pid{a.pid});
    if (it == lts.state(i).pool.end()) continue;
    const auto* live = std::get_if<LiveProcess>(&it->second);
    if (live && live->stack.empty() && live->redex.as_value() && *live->redex.as_value() == want) {
      if (!best || lts.depth(i) < lts.depth(*best)) best = i;
    }
  }
  if (!best) {
    emit(g, {{"found", false}}, "no explored state has #" + std::to_string(a.pid) + " finished with " + print(want) + "\n");
    return lts.complete() ? kNegative : kUndecided;
  }
  Trace t = lts.trace_to(*best);
  if (!a.out.empty()) write_file(a.out, to_json(t).dump(1) + "\n");
  emit(g, {{"found", true}, {"trace", to_json(t)}, {"node", render_node(lts.state(*best))}},
       std::to_string(t.size()) + " steps\n" + trace_text(t));
  return kOk;
}

struct SimulateArgs {
  std::string node;
  std::uint64_t seed = 0;
  std::size_t steps = 1000;
  std::string out;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  Node start = load_node(a.node);
  RandomRun run = random_run(start, a.seed, a.steps);
  if (!a.out.empty()) write_file(a.out, to_json(run.trace).dump(1) + "\n");
  emit(g, {{"trace", to_json(run.trace)}, {"node", render_node(run.node)}},
       trace_text(run.trace) + print_node(run.node));
  return kOk;
}

struct ServeArgs {
  http::ServerOptions options;
  std::string snapshot_dir;
  std::string static_dir;
};

int cmd_serve(const ServeArgs& a) {
  std::optional<std::filesystem::path> snapshots;
  if (!a.snapshot_dir.empty()) snapshots = a.snapshot_dir;
  SessionService service(snapshots);
  http::ServerOptions opts = a.options;
  if (!a.static_dir.empty()) opts.static_dir = a.static_dir;
  http::Server server(service, opts);
  const int port = server.bind();
  if (port < 0) {
    std::cerr << "cannot bind " << opts.host << ":" << opts.port << "\n";
    return kBadInput;
  }
  std::cout << "listening on http://" << opts.host << ":" << port << std::endl;
  server.listen();
  return kOk;
}

void add_bounds(CLI::App* cmd, ExplorationConfig& cfg) {
  cmd->add_option("--depth", cfg.depth_bound, "Depth bound")->capture_default_str();
  cmd->add_option("--states", cfg.state_bound, "State bound")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent Core Erlang semantics: stepping, exploration and equivalence"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a program sequentially");
  eval->add_option("file", eval_args.file)->required();
  eval->add_option("--fuel", eval_args.fuel, "Maximum number of steps")->capture_default_str();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Replay a trace on a node");
  run->add_option("node", run_args.node, "Node configuration (.node JSON or .cerl program)")->required();
  run->add_option("--trace", run_args.trace)->required();

  ExploreArgs explore_args;
  auto* expl = app.add_subcommand("explore", "Explore every interleaving up to the bounds");
  expl->add_option("node", explore_args.node)->required();
  add_bounds(expl, explore_args.cfg);
  expl->add_flag("--tau-only", explore_args.cfg.tau_only, "Follow only sequential steps");
  expl->add_option("--lts", explore_args.lts_out, "Write the transition system as JSON");

  EquivArgs equiv_args;
  auto* equiv = app.add_subcommand("check-equiv", "Decide weak bisimilarity of two nodes");
  equiv->add_option("left", equiv_args.left)->required();
  equiv->add_option("right", equiv_args.right)->required();
  add_bounds(equiv, equiv_args.cfg);
  equiv->add_option("--witness", equiv_args.witness_out, "Write the witness relation as JSON");

  PropsConfig props_cfg;
  auto* props = app.add_subcommand("props", "Run the property suites");
  props->add_option("--seed", props_cfg.seed)->capture_default_str();
  props->add_option("--cases", props_cfg.cases, "Cases per randomized suite")->capture_default_str();
  props->add_option("--ordering-cases", props_cfg.ordering_cases)->capture_default_str();
  props->add_option("--random-nodes", props_cfg.random_nodes)->capture_default_str();
  props->add_option("--depth", props_cfg.depth)->capture_default_str();

  FindArgs find_args;
  auto* find = app.add_subcommand("find", "Shortest trace after which a process has finished with a value");
  find->add_option("node", find_args.node)->required();
  find->add_option("--pid", find_args.pid)->required();
  find->add_option("--value", find_args.value, "Value in concrete syntax")->required();
  find->add_option("--out", find_args.out, "Write the trace as JSON");
  add_bounds(find, find_args.cfg);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Seeded random run");
  sim->add_option("node", sim_args.node)->required();
  sim->add_option("--seed", sim_args.seed)->capture_default_str();
  sim->add_option("--steps", sim_args.steps)->capture_default_str();
  sim->add_option("--out", sim_args.out, "Write the trace as JSON");

  ServeArgs serve_args;
  serve_args.options.port = http::default_port();
  auto* serve = app.add_subcommand("serve", "Serve the stepping session API over HTTP");
  serve->add_option("--port", serve_args.options.port, "Port (default from CERL_PORT, else 8080)")
      ->capture_default_str();
  serve->add_option("--host", serve_args.options.host)->capture_default_str();
  serve->add_option("--static", serve_args.static_dir, "Directory of static assets to serve at /");
  serve->add_option("--snapshot-dir", serve_args.snapshot_dir, "Persist sessions in this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(g, eval_args);
    if (*run) return cmd_run(g, run_args);
    if (*expl) return cmd_explore(g, explore_args);
    if (*equiv) return cmd_check_equiv(g, equiv_args);
    if (*props) return cmd_props(g, props_cfg);
    if (*find) return cmd_find(g, find_args);
    if (*sim) return cmd_simulate(g, sim_args);
    if (*serve) return cmd_serve(serve_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kBadInput;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
