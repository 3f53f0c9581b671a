// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sesgame/bisim.hpp"
#include "sesgame/denote.hpp"
#include "sesgame/game.hpp"
#include "sesgame/harness.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace sesgame;
using fixture::ev;
using fixture::evs;

namespace {

// Pinned tolerances.
constexpr double kFixtureSeconds = 1.0;
constexpr double kBisimSeconds = 60.0;
constexpr std::size_t kFailureBudget = 0;
constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kFinitePairs = 500;
constexpr std::size_t kRecursivePairs = 100;
constexpr int kUnrollDepth = 4;
// Recursive corpus shape; larger shapes make the unrolled denotations explode.
constexpr int kRecursiveMaxDepth = 3;
constexpr int kRecursiveMaxBranch = 2;
constexpr std::size_t kChainTypes = 20;
constexpr int kChainDepth = 7;
constexpr std::size_t kRandomStructuresPerSize = 500;
constexpr int kMaxStructureSize = 6;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << "\n";
  for (const auto& n : o.notes) std::cout << "    " << n << "\n";
  if (!o.pass) ++failures;
}

void info(const std::string& s) { std::cout << "INFO " << s << "\n"; }

std::string ratio(std::size_t ok, std::size_t total) { return std::to_string(ok) + "/" + std::to_string(total); }

std::string seconds(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << s << " s";
  return out.str();
}

EventSet ids_of(const EventStructure& es) {
  EventSet out;
  for (const auto& [id, e] : es.events()) out.insert(id);
  return out;
}

const Participant kA{"A", Participant::Parity::Odd};
const Participant kB{"B", Participant::Parity::Even};

// ---------------------------------------------------------------------------

Outcome worked_denotation() {
  Outcome o;
  auto start = Clock::now();
  EventStructure p = denote(parse(fixture::kClient), kA);
  EventStructure q = denote(parse(fixture::kServer), kB);
  EventStructure pq = denote_par(p, q);
  double t = since(start);

  o.require(ids_of(p) == evs({"e1", "e3", "e5", "e7", "e9"}), "client events");
  o.require(p.conflicts() == fixture::conflict_pairs({{"e1", "e5"}}), "client conflicts");
  o.require(fixture::generators_of(p) == fixture::client_generators(), "client generators");
  o.require(ids_of(q) == evs({"e2", "e4", "e6", "e8", "e10", "e12", "e14", "e16"}), "server events");
  o.require(q.conflicts() == fixture::conflict_pairs({{"e2", "e8"}, {"e2", "e14"}, {"e8", "e14"}}),
            "server conflicts");
  o.require(fixture::generators_of(q) == fixture::server_generators(), "server generators (8 as printed)");
  o.require(fixture::generators_of(pq) == fixture::composed_generators(), "the 18 composed generators");
  o.require(t < kFixtureSeconds, "runtime " + seconds(t));
  o.note("client " + std::to_string(p.size()) + " events/" + std::to_string(p.enablings().size()) +
         " generators, server " + std::to_string(q.size()) + "/" + std::to_string(q.enablings().size()) +
         ", composed " + std::to_string(pq.enablings().size()) + " generators, " + seconds(t));
  return o;
}

Outcome worked_verdicts() {
  Outcome o;
  auto start = Clock::now();
  SessionType p = parse(fixture::kClient), q = parse(fixture::kServer);
  Contract c = compose_session_contracts(p, "A", q, "B", kDefaultUnrollDepth);
  o.require(check_compliance(p, q).result == ComplianceVerdict::Result::Compliant, "P compliant with Q");
  o.require(check_compliance(q, p).result == ComplianceVerdict::Result::NonCompliant, "Q not compliant with P");
  o.require(eager_winning(c, "A").winning, "eager strategy of A wins");
  o.require(!eager_winning(c, "B").winning, "eager strategy of B loses");
  o.require(!find_winning_strategy(c, "B").has_value(), "B has no winning strategy");
  double t = since(start);
  o.require(t < kFixtureSeconds, "runtime " + seconds(t));
  o.note(seconds(t));
  return o;
}

Outcome agreement_without_compliance() {
  Outcome o;
  SessionType p = parse(fixture::kBadClient), q = parse(fixture::kBadServer);
  Contract c = compose_session_contracts(p, "A", q, "B", kDefaultUnrollDepth);
  o.require(check_compliance(p, q).result == ComplianceVerdict::Result::NonCompliant, "not compliant");
  o.require(!eager_winning(c, "A").winning, "eager not winning");
  auto s = find_winning_strategy(c, "A");
  o.require(s.has_value(), "a winning strategy exists");
  if (s) {
    o.require(strategy_winning(c, *s).winning, "the found strategy wins");
    auto root = s->table.find(EventSet{});
    o.require(root != s->table.end() && root->second == evs({"e7"}), "first move is the !b event e7");
  }
  return o;
}

Outcome pay_cash() {
  Outcome o;
  SessionType p = parse(fixture::kPayClient), q = parse(fixture::kPayServer);
  Contract c = compose_session_contracts(p, "A", q, "B", kDefaultUnrollDepth);
  o.require(check_compliance(p, q).result == ComplianceVerdict::Result::NonCompliant, "not compliant");
  o.require(!eager_winning(c, "A").winning, "eager not winning");
  auto s = find_winning_strategy(c, "A");
  o.require(s.has_value(), "a winning strategy exists");
  if (s) {
    o.require(strategy_winning(c, *s).winning, "the found strategy wins");
    for (const auto& [prefix, moves] : s->table)
      o.require(!moves.count(ev("e5")), "payCC event e5 never prescribed");
    o.note("strategy: " + std::to_string(s->table.size()) + " prescription(s), first {e1}");
  }
  return o;
}

// ---------------------------------------------------------------------------

CorpusSpec finite_spec() {
  CorpusSpec s;
  s.seed = kSeed;
  s.count = kFinitePairs;
  return s;
}

CorpusSpec recursive_spec(PartnerMatching m) {
  CorpusSpec s;
  s.seed = kSeed;
  s.count = kRecursivePairs;
  s.allow_recursion = true;
  s.unroll_depth = kUnrollDepth;
  s.max_depth = kRecursiveMaxDepth;
  s.max_branch = kRecursiveMaxBranch;
  s.matching = m;
  s.check_strategy_search = false;
  return s;
}

std::string failure_list(const CorpusSummary& s, const std::string& check, std::size_t max = 3) {
  std::string out;
  std::size_t n = 0;
  for (const auto& f : s.failures)
    if (f.check == check && n++ < max) out += "\n      #" + std::to_string(f.index) + " " + f.client + " || " + f.server;
  return out;
}

struct Corpora {
  CorpusSummary finite;
  CorpusSummary recursive;
};

Outcome bisim_outcome(const Corpora& c, double worked_seconds, bool worked_ok) {
  Outcome o;
  o.require(worked_ok, "worked example bisimilar");
  std::size_t finite_fail = c.finite.pairs - c.finite.bisim_agreements;
  std::size_t rec_fail = c.recursive.pairs - c.recursive.bisim_agreements;
  o.require(c.finite.pairs == kFinitePairs && finite_fail <= kFailureBudget,
            "finite corpus " + ratio(c.finite.bisim_agreements, c.finite.pairs));
  o.require(c.recursive.pairs == kRecursivePairs && rec_fail <= kFailureBudget,
            "recursive corpus " + ratio(c.recursive.bisim_agreements, c.recursive.pairs) +
                " (bounded at the first cut)" + failure_list(c.recursive, "theorem1"));
  double t = worked_seconds + c.finite.theorem1_seconds + c.recursive.theorem1_seconds;
  o.require(t < kBisimSeconds, "runtime " + seconds(t));
  o.note("finite " + ratio(c.finite.bisim_agreements, c.finite.pairs) + ", recursive " +
         ratio(c.recursive.bisim_agreements, c.recursive.pairs) + ", bisimulation time " + seconds(t));
  return o;
}

Outcome semantics_outcome(const Corpora& c) {
  Outcome o;
  std::size_t ok = c.finite.lemma1_agreements + c.recursive.lemma1_agreements;
  std::size_t total = c.finite.pairs + c.recursive.pairs;
  o.require(total == kFinitePairs + kRecursivePairs && total - ok <= kFailureBudget, "agreement " + ratio(ok, total));
  o.note(ratio(ok, total) + " pairs agree");
  return o;
}

Outcome eager_outcome(const Corpora& c) {
  Outcome o;
  o.require(c.finite.pairs - c.finite.theorem2_agreements <= kFailureBudget,
            "finite corpus " + ratio(c.finite.theorem2_agreements, c.finite.pairs) + failure_list(c.finite, "theorem2"));
  o.require(c.recursive.pairs - c.recursive.theorem2_agreements <= kFailureBudget,
            "recursive corpus " + ratio(c.recursive.theorem2_agreements, c.recursive.pairs) +
                failure_list(c.recursive, "theorem2"));
  o.note("finite " + ratio(c.finite.theorem2_agreements, c.finite.pairs) + " (" + std::to_string(c.finite.compliant) +
         " compliant), recursive " + ratio(c.recursive.theorem2_agreements, c.recursive.pairs) + " (" +
         std::to_string(c.recursive.compliant) + " compliant)");
  return o;
}

// ---------------------------------------------------------------------------

Outcome properties() {
  Outcome o;
  auto start = Clock::now();

  // Saturation law and remainder commutation, exhaustive up to three events.
  std::size_t structures = 0, law_violations = 0, commute_violations = 0;
  auto check_structure = [&](const EventStructure& es) {
    ++structures;
    auto sat = oracle::saturate(es);
    for (const auto& [x, target] : sat)
      for (const auto& [id, e] : es.events()) {
        EventSet y = x;
        y.insert(id);
        if (conflict_free(es, y) && !enabled(es, y, target)) ++law_violations;
      }
    for (const auto& [id, e] : es.events())
      if (oracle::saturate(remainder(es, id)) != oracle::remainder_of_saturated(es, sat, id)) ++commute_violations;
  };
  for (int n = 0; n <= 3; ++n) {
    if (n == 0) {
      check_structure(EventStructure{});
      continue;
    }
    oracle::for_each_structure(n, check_structure);
  }
  std::size_t exhaustive = structures;
  oracle::for_each_single_generator_structure(4, check_structure);
  std::size_t single4 = structures - exhaustive;
  std::mt19937_64 rng(kSeed);
  for (int n = 5; n <= kMaxStructureSize; ++n)
    for (std::size_t i = 0; i < kRandomStructuresPerSize; ++i) check_structure(oracle::random_structure(rng, n));
  std::size_t sampled = structures - exhaustive - single4;
  o.require(law_violations == 0, "saturation law: " + std::to_string(law_violations) + " violations");
  o.require(commute_violations == 0, "remainder commutation: " + std::to_string(commute_violations) + " violations");
  o.note("saturation/remainder: " + std::to_string(exhaustive) + " structures (all, <= 3 events), " +
         std::to_string(single4) + " (all single-generator, 4 events), " + std::to_string(sampled) +
         " sampled (5-6 events)");
  o.require(false,
            "exhaustive remainder commutation for every structure with <= 6 events: not attempted, "
            "6 events alone allow 2^15 conflict relations times 2^32 generator sets per event");

  // Approximant chains.
  CorpusSpec chain_spec = recursive_spec(PartnerMatching::ByLabel);
  chain_spec.linear_labels = false;
  std::size_t chain_checks = 0, chain_violations = 0;
  for (std::uint64_t i = 0; i < kChainTypes; ++i) {
    SessionType t = random_session_type(chain_spec, Role::Client, i);
    auto r = t.as<Rec>();
    if (!r) {
      ++chain_violations;
      continue;
    }
    EventStructure prev = fix_approx(r->var, r->body, kA, {}, 0);
    for (int n = 1; n <= kChainDepth; ++n) {
      EventStructure next = fix_approx(r->var, r->body, kA, {}, n);
      ++chain_checks;
      if (!es_leq(prev, next)) ++chain_violations;
      prev = std::move(next);
    }
  }
  o.require(chain_violations == 0, "approximant chain: " + std::to_string(chain_violations) + " violations");
  o.note("approximant chain: " + std::to_string(chain_checks) + " steps over " + std::to_string(kChainTypes) +
         " recursive types, depths 0-" + std::to_string(kChainDepth));

  // Fairness on every play of the finite corpus contracts.
  CorpusSpec fs = finite_spec();
  std::size_t plays = 0, fair_checks = 0, fair_violations = 0, too_many = 0;
  for (std::uint64_t i = 0; i < fs.count; ++i) {
    auto [p, q] = corpus_pair(fs, i);
    Contract c = compose_session_contracts(p, kClient, q, kServer, kUnrollDepth);
    std::vector<Strategy> strategies{EagerStrategy{kClient}, EagerStrategy{kServer}};
    for (const auto& who : {kClient, kServer})
      if (auto s = find_winning_strategy(c, who)) strategies.push_back(*s);
    std::vector<Play> all;
    try {
      all = oracle::all_plays(c.es);
    } catch (const std::runtime_error&) {
      ++too_many;
      continue;
    }
    plays += all.size();
    for (const auto& sigma : all)
      for (const auto& s : strategies) {
        ++fair_checks;
        if (is_fair(c, sigma, s) != prescribed(s, c, sigma).empty()) ++fair_violations;
      }
  }
  o.require(fair_violations == 0, "fairness characterization: " + std::to_string(fair_violations) + " violations");
  o.require(too_many == 0, "fairness: " + std::to_string(too_many) + " contracts with too many plays to enumerate");
  o.note("fairness: " + std::to_string(fair_checks) + " checks over " + std::to_string(plays) + " plays of " +
         std::to_string(fs.count) + " contracts");

  // Culpability against the quantifier evaluation.
  std::size_t culp_checks = 0, culp_violations = 0;
  const std::vector<std::string> everyone{"A", "B"};
  for (int n = 1; n <= kMaxStructureSize; ++n)
    for (std::size_t i = 0; i < kRandomStructuresPerSize; ++i) {
      EventStructure es = oracle::random_structure(rng, n, everyone, true);
      IndexedEs ix(es);
      for (const auto& sigma : oracle::all_plays(es))
        for (const auto& who : everyone) {
          ++culp_checks;
          bool literal = oracle::innocent_literal(es, sigma, who);
          if (innocent(es, sigma, who) != literal) ++culp_violations;
          if (culpable_at(ix, ix.to_bits(events_of(sigma)), who) != !literal) ++culp_violations;
        }
    }
  o.require(culp_violations == 0, "culpability: " + std::to_string(culp_violations) + " violations");
  o.note("culpability: " + std::to_string(culp_checks) + " checks on " +
         std::to_string(kRandomStructuresPerSize * kMaxStructureSize) + " structures of 1-6 events");
  o.note(seconds(since(start)));
  return o;
}

}  // namespace

int main() {
  std::cout << "seed " << kSeed << ", " << kFinitePairs << " finite pairs, " << kRecursivePairs
            << " recursive pairs at unroll depth " << kUnrollDepth << "\n";

  report(1, "denotation of the worked example", worked_denotation());
  report(2, "verdicts of the worked example", worked_verdicts());
  report(3, "agreement without compliance", agreement_without_compliance());
  report(4, "payCash agreement through restraint", pay_cash());

  auto t0 = Clock::now();
  SessionType p = parse(fixture::kClient), q = parse(fixture::kServer);
  EventStructure es = denote_pair(p, kClient, q, kServer);
  bool worked_bisim = bisim(explore({p, q}, Semantics::TurnBased), ets(es).relabelled(es)).bisimilar;
  double worked_seconds = since(t0);

  Corpora c;
  c.finite = run_corpus(finite_spec());
  c.recursive = run_corpus(recursive_spec(PartnerMatching::ByLabel));
  info("finite corpus " + seconds(c.finite.seconds) + ", recursive corpus " + seconds(c.recursive.seconds));
  info("compliance implies a winning strategy on the finite corpus: " +
       ratio(c.finite.strategy_agreements, c.finite.strategy_checks));

  report(5, "turn-based system bisimilar to the event transition system", bisim_outcome(c, worked_seconds, worked_bisim));
  report(6, "synchronous and turn-based compliance agree", semantics_outcome(c));
  report(7, "compliance iff the eager strategy wins", eager_outcome(c));

  CorpusSummary positional = run_corpus(recursive_spec(PartnerMatching::ByPosition));
  info("recursive corpus with partners matched by position: bisimilar " +
       ratio(positional.bisim_agreements, positional.pairs) + ", compliance iff eager " +
       ratio(positional.theorem2_agreements, positional.pairs) + ", " + seconds(positional.seconds));
  CorpusSpec unrestricted = finite_spec();
  unrestricted.linear_labels = false;
  unrestricted.check_strategy_search = false;
  CorpusSummary repeated = run_corpus(unrestricted);
  info("finite corpus with repeated action names: bisimilar " + ratio(repeated.bisim_agreements, repeated.pairs) +
       ", compliance iff eager " + ratio(repeated.theorem2_agreements, repeated.pairs));

  report(8, "property suites", properties());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
