// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cerl/equivalence.hpp"
#include "cerl/generate.hpp"
#include "cerl/json_io.hpp"
#include "cerl/props.hpp"
#include "cerl/text.hpp"

using namespace cerl;

namespace {

using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CERL_CORPUS_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Node corpus_node(const std::string& name) {
  if (name.ends_with(".cerl")) return make_node({{Pid{1}, parse_expr(slurp(name))}});
  return node_from_config(json::parse(slurp(name)));
}

const std::vector<std::string> kCorpus = {"mm.cerl",        "map_result.node",     "signal_order.node",
                                          "exit_kill.node", "exit_kill_self.node", "let_kill.node"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    out.pass = false;
    out.detail += "; over the time limit";
  }
  failures += !out.pass;
  std::printf("%s  %-34s %s (%.2f s", out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
  if (limit_s > 0) std::printf(", limit %.0f s", limit_s);
  std::printf(")\n");
  std::fflush(stdout);
}

bool has_final(const Lts& lts, Pid pid, const Value& v) {
  auto fv = final_values(lts);
  const auto& vs = fv[pid];
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

std::string verdicts(const std::vector<PropertyResult>& rs) {
  std::string s;
  for (const auto& r : rs) {
    if (!s.empty()) s += ", ";
    s += r.name + " " + std::to_string(r.cases) + "/" + std::to_string(r.failures);
    if (!r.ok() && !r.samples.empty()) s += " [" + r.samples.front() + "]";
  }
  return s;
}

/// The same surroundings for process #1 on both sides: mailbox contents,
/// links, the trap flag and signals already travelling towards it.
void add_context(Node& n, std::uint64_t seed) {
  auto& p = std::get<LiveProcess>(n.pool.at(Pid{1}));
  Generator local(seed);
  for (std::size_t k = local.below(3); k > 0; --k) p.mailbox.push_back(local.value(2, false));
  if (local.chance(0.5)) p.links.push_back(Pid{2});
  if (local.chance(0.3)) p.links.push_back(Pid{3});
  p.trap_exit = local.chance(0.5);
  for (std::size_t k = 1 + local.below(3); k > 0; --k) {
    n.ether = n.ether.push(Pid{2 + local.below(2)}, Pid{1}, local.signal());
  }
}

}  // namespace

int main() {
  const Value one_two_three = Value::list(std::vector{Value::integer(1), Value::integer(2), Value::integer(3)});

  criterion("map evaluation", 1.0, [&] {
    auto out = seq_eval({}, parse_expr(slurp("mm.cerl")), 100000);
    const auto* f = std::get_if<Finished>(&out);
    if (f == nullptr) return Outcome{false, "did not finish"};
    return Outcome{f->value == one_two_three, "value " + print(f->value)};
  });

  criterion("signal order example", 10.0, [&] {
    ExplorationConfig cfg;
    cfg.depth_bound = 40;
    Lts lts = explore(corpus_node("signal_order.node"), cfg);
    const bool snd = has_final(lts, Pid{3}, Value::atom("snd"));
    const bool fst = has_final(lts, Pid{3}, Value::atom("fst"));
    return Outcome{snd && fst, std::to_string(lts.size()) + " states; #3 ends with 'snd': " +
                                   (snd ? "yes" : "no") + ", with 'fst': " + (fst ? "yes" : "no")};
  });

  criterion("kill examples", 10.0, [&] {
    Lts two = explore(corpus_node("exit_kill.node"), {});
    Lts one = explore(corpus_node("exit_kill_self.node"), {});
    const bool a = has_final(two, Pid{2}, parse_value("['EXIT', #1, 'killed']"));
    const bool b = has_final(one, Pid{2}, parse_value("['EXIT', #1, 'kill']"));
    return Outcome{a && b, std::string("exit/2 gives 'killed': ") + (a ? "yes" : "no") +
                               ", exit/1 gives 'kill': " + (b ? "yes" : "no")};
  });

  criterion("determinism", 0, [&] {
    PropsConfig cfg;
    cfg.cases = 1000;
    auto s = check_seq_determinism(cfg);
    auto l = check_local_determinism(cfg);
    const bool ok = s.ok() && l.ok() && s.cases >= 1000 && l.cases >= 1000;
    return Outcome{ok, verdicts({s, l})};
  });

  criterion("exit decision table", 0, [&] {
    auto r = check_exit_table();
    // second route: the outcomes of exit_decision itself against the
    // documented gap predicate
    std::size_t cases = 0, unexpected = 0;
    for (bool trap : {false, true}) {
      for (const char* reason : {"normal", "kill", "killed", "other"}) {
        for (bool link_flag : {false, true}) {
          for (bool from_self : {false, true}) {
            for (bool linked : {false, true}) {
              ++cases;
              const Pid self{1}, src = from_self ? Pid{1} : Pid{2};
              std::vector<Pid> links;
              if (linked) links.push_back(src);
              const bool none = std::holds_alternative<NoRule>(
                  exit_decision(trap, Value::atom(reason), link_flag, src, self, links));
              const bool gap = link_flag && from_self && !linked && (trap || std::string(reason) != "normal");
              unexpected += none != gap;
            }
          }
        }
      }
    }
    return Outcome{r.ok() && r.cases == 64 && cases == 64 && unexpected == 0,
                   verdicts({r}) + "; " + r.note + "; " + std::to_string(unexpected) + " unexpected outcomes"};
  });

  criterion("signal ordering", 0, [&] {
    PropsConfig cfg;
    cfg.ordering_cases = 500;
    auto r = check_signal_ordering(cfg);
    return Outcome{r.ok() && r.cases >= 500, verdicts({r}) + "; " + r.note};
  });

  criterion("confluence, ordering, chaining", 300.0, [&] {
    PropsConfig cfg;
    cfg.random_nodes = 20;
    cfg.depth = 12;
    auto nodes = property_nodes(cfg);
    ExplorationConfig ex;
    ex.depth_bound = 12;
    ex.state_bound = 20000;
    auto rs = check_node_properties(nodes, ex);
    rs.push_back(check_local_tau_confluence(cfg));
    bool ok = nodes.size() >= 24;
    for (const auto& r : rs) ok = ok && r.ok() && r.cases > 0;
    return Outcome{ok, std::to_string(nodes.size()) + " nodes; " + verdicts(rs)};
  });

  criterion("bisimulation", 0, [&] {
    std::size_t identity_ok = 0;
    for (const auto& name : kCorpus) {
      Lts lts = explore(corpus_node(name), {});
      identity_ok += check_bisimulation(NodeRelation::identity(lts), lts, lts).verdict == Verdict::Holds;
    }
    std::size_t holds = 0;
    const std::size_t contexts = 10;
    std::string first_bad;
    for (std::size_t c = 0; c < contexts; ++c) {
      Node a = corpus_node("mm.cerl"), b = corpus_node("map_result.node");
      add_context(a, 1000 + c);
      add_context(b, 1000 + c);
      auto res = weakly_bisimilar(a, b, {});
      // the witness must pass the relation check on its own
      const bool rechecked =
          res.report.verdict == Verdict::Holds &&
          check_weak_bisimulation(NodeRelation::from_ids(res.left, res.right, res.report.witness), res.left,
                                  res.right)
                  .verdict == Verdict::Holds;
      if (rechecked) {
        ++holds;
      } else if (first_bad.empty()) {
        first_bad = std::string("; ") + verdict_name(res.report.verdict) + " under\n" + print_node(a);
      }
    }
    return Outcome{identity_ok == kCorpus.size() && holds == contexts,
                   "identity holds on " + std::to_string(identity_ok) + "/" + std::to_string(kCorpus.size()) +
                       " corpus systems; map program ~ [1, 2, 3] in " + std::to_string(holds) + "/" +
                       std::to_string(contexts) + " contexts" + first_bad};
  });

  criterion("reduction is not a congruence", 0, [&] {
    Lts lts = explore(corpus_node("let_kill.node"), {});
    Trace two_taus{{Pid{0}, TauAction{}}, {Pid{0}, TauAction{}}};
    auto rel = NodeRelation::along_trace(lts, lts, two_taus);
    auto rep = check_weak_bisimulation(rel, lts, lts);
    if (rep.verdict != Verdict::FailsAt || !rep.failure) {
      return Outcome{false, std::string("verdict ") + verdict_name(rep.verdict)};
    }
    const auto* arr = std::get_if<ArriveAction>(&rep.failure->action);
    const bool kill_arrival = arr && arr->signal == Signal{ExitSignal{Value::atom("kill"), false}};
    return Outcome{kill_arrival, "FailsAt on " + print_action(rep.failure->action) + ": " + rep.failure->reason};
  });

  criterion("replay", 0, [&] {
    std::vector<Node> nodes;
    for (const auto& name : kCorpus) nodes.push_back(corpus_node(name));
    std::size_t ok = 0, steps = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const Node& n = nodes[seed % nodes.size()];
      auto run = random_run(n, seed, 1000);
      steps += run.trace.size();
      Replay r = run_trace(n, run.trace);
      ok += r.ok() && r.node == run.node;
    }
    return Outcome{ok == 1000, std::to_string(ok) + "/1000 runs replay identically, " + std::to_string(steps) +
                                   " steps"};
  });

  std::printf("%s\n", failures == 0 ? "all criteria pass" : "some criteria fail");
  return failures == 0 ? 0 : 1;
}
