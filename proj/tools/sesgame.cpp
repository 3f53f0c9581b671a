// Command-line front end: check, agree, export, corpus.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sesgame/denote.hpp"
#include "sesgame/event_structure.hpp"
#include "sesgame/game.hpp"
#include "sesgame/harness.hpp"
#include "sesgame/opsem.hpp"
#include "sesgame/syntax.hpp"

using namespace sesgame;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

struct Inputs {
  std::string client_text;
  std::string server_text;
  std::vector<std::string> names{"A", "B"};
  int depth = kDefaultUnrollDepth;
  std::size_t limit = kDefaultStateLimit;
  std::string format = "json";
  std::string matching = "label";
};

// An argument naming an existing file is read from disk; anything else is the type itself.
SessionType load(const std::string& arg) {
  std::string text = arg;
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  SessionType t = parse(text);
  require_valid(t);
  return t;
}

std::string lts_json(const Lts& l) {
  json j;
  j["states"] = l.size();
  j["initial"] = l.initial;
  j["truncated"] = l.truncated;
  j["edges"] = json::array();
  for (const auto& e : l.edges) j["edges"].push_back({{"from", e.from}, {"label", e.label}, {"to", e.to}});
  return j.dump(2);
}

void print_verdict_text(const std::string& title, const ComplianceVerdict& v) {
  std::cout << title << ": " << to_string(v.result);
  if (v.bounded_depth) std::cout << " (bounded, depth " << *v.bounded_depth << ")";
  std::cout << "\n";
  if (!v.witness.empty()) {
    std::cout << "  witness:";
    for (const auto& s : v.witness) std::cout << " " << s;
    std::cout << "\n  stuck at: " << v.stuck_state << "\n";
  }
}

int cmd_check(const Inputs& in) {
  SessionType p = load(in.client_text);
  SessionType q = load(in.server_text);
  ComplianceOptions opts;
  opts.state_limit = in.limit;
  auto sync = check_compliance(p, q, opts);
  auto turn = check_compliance_turn(p, q, opts);
  if (in.format == "text") {
    print_verdict_text("synchronous", sync);
    print_verdict_text("turn-based", turn);
  } else {
    json j;
    j["client"] = pretty(p);
    j["server"] = pretty(q);
    j["synchronous"] = json::parse(to_json(sync));
    j["turn_based"] = json::parse(to_json(turn));
    j["agree"] = sync.result == turn.result;
    std::cout << j.dump(2) << "\n";
  }
  if (sync.result == ComplianceVerdict::Result::Indeterminate || sync.result != turn.result) return kExitError;
  return sync.compliant() ? kExitOk : kExitNo;
}

int cmd_agree(const Inputs& in, const std::string& participant, const std::string& strategy) {
  SessionType p = load(in.client_text);
  SessionType q = load(in.server_text);
  Contract c = compose_session_contracts(p, in.names[0], q, in.names[1], in.depth, matching_from_string(in.matching));
  std::optional<int> bound;
  if (has_recursion(p) || has_recursion(q)) bound = in.depth;

  WinVerdict v;
  if (strategy == "eager") {
    v = eager_winning(c, participant);
  } else {
    v.participant = participant;
    v.strategy_kind = "synthesized";
    v.strategy = find_winning_strategy(c, participant);
    v.winning = v.strategy.has_value();
  }
  v.bounded_depth = bound;
  if (in.format == "text") {
    std::cout << participant << " (" << v.strategy_kind << "): " << (v.winning ? "winning" : "not winning");
    if (bound) std::cout << " (bounded, depth " << *bound << ")";
    std::cout << "\n";
    if (!v.counterexample.empty()) {
      std::cout << "  counterexample:";
      for (const auto& e : v.counterexample) std::cout << " " << e.str();
      std::cout << "\n";
    }
    if (v.strategy)
      for (const auto& [prefix, moves] : v.strategy->table) {
        std::cout << "  after {";
        const char* sep = "";
        for (const auto& e : prefix) std::cout << std::exchange(sep, ",") << e.str();
        std::cout << "} do {";
        sep = "";
        for (const auto& e : moves) std::cout << std::exchange(sep, ",") << e.str();
        std::cout << "}\n";
      }
  } else {
    std::cout << to_json(v) << "\n";
  }
  return v.winning ? kExitOk : kExitNo;
}

int cmd_export(const Inputs& in, const std::string& what, const std::string& output) {
  SessionType p = load(in.client_text);
  SessionType q = load(in.server_text);
  std::string text;
  if (what == "es") {
    if (in.format != "json") throw std::invalid_argument("event structures are exported as json only");
    text = to_json(denote_pair(p, in.names[0], q, in.names[1], in.depth, matching_from_string(in.matching)));
  } else if (what == "ets") {
    EventStructure es = denote_pair(p, in.names[0], q, in.names[1], in.depth, matching_from_string(in.matching));
    Ets t = ets(es, in.limit);
    text = in.format == "dot" ? ets_to_dot(t, es, "ets") : lts_json(t.lts);
  } else {
    Lts l = explore(Configuration{p, q}, Semantics::TurnBased, in.limit);
    text = in.format == "dot" ? to_dot(l, "ts") : lts_json(l);
  }
  if (output.empty()) {
    std::cout << text << "\n";
    return kExitOk;
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << text << "\n";
  if (!out) throw std::runtime_error("write failed for " + output);
  return kExitOk;
}

int cmd_corpus(const CorpusSpec& spec) {
  auto summary = run_corpus(spec);
  std::cout << to_json(summary) << "\n";
  return summary.failures.empty() ? kExitOk : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary session types: compliance, event structures and contract games"};
  app.require_subcommand(1);

  Inputs in;
  auto add_common = [&](CLI::App* sub, bool dot) {
    sub->add_option("client", in.client_text, "client type, inline or a file")->required();
    sub->add_option("server", in.server_text, "server type, inline or a file")->required();
    sub->add_option("--depth", in.depth, "recursion unrolling depth")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--limit", in.limit, "state limit")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--names", in.names, "participant names")->expected(2)->capture_default_str();
    sub->add_option("--matching", in.matching, "partner matching of the parallel denotation")
        ->capture_default_str()
        ->check(CLI::IsMember({"label", "position"}));
    std::vector<std::string> formats{"json", "text"};
    if (dot) formats = {"json", "dot"};
    sub->add_option("--format", in.format, "output format")->capture_default_str()->check(CLI::IsMember(formats));
  };

  auto* check = app.add_subcommand("check", "decide compliance of client with server");
  add_common(check, false);

  std::string participant = "A";
  std::string strategy = "eager";
  auto* agree = app.add_subcommand("agree", "decide whether a participant can win the composed contract");
  add_common(agree, false);
  agree->add_option("--participant", participant, "participant")->capture_default_str();
  agree->add_option("--strategy", strategy, "eager or search")
      ->capture_default_str()
      ->check(CLI::IsMember({"eager", "search"}));

  std::string what;
  std::string output;
  auto* exp = app.add_subcommand("export", "print the event structure or a transition system");
  exp->add_option("what", what, "es, ets or ts")->required()->check(CLI::IsMember({"es", "ets", "ts"}));
  add_common(exp, true);
  exp->add_option("-o,--output", output, "write to this file instead of stdout");

  CorpusSpec spec;
  bool unrestricted = false;
  std::string corpus_matching = "label";
  auto* corpus = app.add_subcommand("corpus", "run the semantic cross-checks on a random corpus");
  corpus->add_option("--seed", spec.seed, "seed")->capture_default_str();
  corpus->add_option("--count", spec.count, "number of pairs")->capture_default_str();
  corpus->add_option("--depth,--unroll-depth", spec.unroll_depth, "recursion unrolling depth")->capture_default_str();
  corpus->add_option("--max-depth", spec.max_depth, "syntactic depth")->capture_default_str();
  corpus->add_option("--max-branch", spec.max_branch, "branches per choice")->capture_default_str();
  corpus->add_option("--limit", spec.state_limit, "state limit")->capture_default_str();
  corpus->add_flag("--recursive", spec.allow_recursion, "generate recursive types");
  corpus->add_option("--matching", corpus_matching, "partner matching of the parallel denotation")
      ->capture_default_str()
      ->check(CLI::IsMember({"label", "position"}));
  corpus->add_flag("--unrestricted-labels", unrestricted, "allow an action name to repeat along a path");
  corpus->add_flag("!--no-search", spec.check_strategy_search, "skip the winning-strategy search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*check) return cmd_check(in);
    if (*agree) return cmd_agree(in, participant, strategy);
    if (*exp) return cmd_export(in, what, output);
    spec.linear_labels = !unrestricted;
    spec.matching = matching_from_string(corpus_matching);
    return cmd_corpus(spec);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
