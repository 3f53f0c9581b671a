#include "sesgame/harness.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <json.hpp>
#include <map>
#include <random>
#include <set>

#include "sesgame/denote.hpp"
#include "sesgame/event_structure.hpp"

namespace sesgame {

namespace {

const std::vector<std::string> kLinearAlphabet = {"a", "b", "c", "d", "e", "f"};
const std::vector<std::string> kSmallAlphabet = {"a", "b", "c"};
const std::string kRecVar = "x";

class Generator {
 public:
  Generator(const CorpusSpec& spec, std::uint64_t stream, std::uint64_t index)
      : spec_(spec), rng_(seeds(spec.seed, stream, index)) {}

  SessionType top() {
    if (spec_.allow_recursion && spec_.max_depth >= 1) return st::rec(kRecVar, choice(spec_.max_depth, {}, true));
    return node(spec_.max_depth, {}, false, false);
  }

  bool coin(int percent) { return pick(0, 99) < percent; }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  const CorpusSpec& spec_;
  std::mt19937_64 rng_;

  static std::mt19937_64 seeds(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
  }

  SessionType leaf(bool in_rec) {
    if (in_rec && coin(60)) return st::var(kRecVar);
    return st::success();
  }

  SessionType node(int depth, const std::set<std::string>& used, bool in_rec, bool guarded) {
    if (depth <= 0) return leaf(in_rec && guarded);
    if (coin(15)) return leaf(in_rec && guarded);
    return choice(depth, used, in_rec);
  }

  // A choice node; a recursion body always starts with one, so every
  // variable occurrence is guarded.
  SessionType choice(int depth, const std::set<std::string>& used, bool in_rec) {
    const auto& alphabet = spec_.linear_labels ? kLinearAlphabet : kSmallAlphabet;
    std::vector<std::string> fresh;
    for (const auto& l : alphabet)
      if (!spec_.linear_labels || !used.count(l)) fresh.push_back(l);
    if (fresh.empty()) return leaf(in_rec);
    std::shuffle(fresh.begin(), fresh.end(), rng_);
    int width = pick(1, std::max(1, std::min({spec_.max_branch, depth, static_cast<int>(fresh.size())})));
    bool internal = coin(50);
    std::vector<Branch> branches;
    for (int i = 0; i < width; ++i) {
      auto below = used;
      below.insert(fresh[i]);
      branches.push_back({fresh[i], node(depth - 1, below, in_rec, true)});
    }
    return internal ? st::internal(std::move(branches)) : st::external(std::move(branches));
  }
};

}  // namespace

SessionType random_session_type(const CorpusSpec& spec, Role role, std::uint64_t index) {
  return Generator(spec, role == Role::Client ? 1 : 2, index).top();
}

SessionType dual(const SessionType& t) {
  if (auto c = t.as<Choice>()) {
    std::vector<Branch> bs;
    for (const auto& b : c->branches) bs.push_back({b.action, dual(b.cont)});
    return c->internal() ? st::external(std::move(bs)) : st::internal(std::move(bs));
  }
  if (auto r = t.as<Rec>()) return st::rec(r->var, dual(r->body));
  return t;
}

namespace {

// Small random edits that keep the type closed and guarded.
SessionType perturb(const SessionType& t, Generator& g, bool in_rec) {
  if (auto c = t.as<Choice>()) {
    std::vector<Branch> bs;
    for (const auto& b : c->branches) {
      if (g.coin(10)) {
        bs.push_back({b.action, st::success()});
        continue;
      }
      bs.push_back({b.action, perturb(b.cont, g, in_rec)});
    }
    if (bs.size() > 1 && g.coin(20)) bs.erase(bs.begin() + g.pick(0, static_cast<int>(bs.size()) - 1));
    return c->internal() ? st::internal(std::move(bs)) : st::external(std::move(bs));
  }
  if (auto r = t.as<Rec>()) return st::rec(r->var, perturb(r->body, g, true));
  if (t.is<Success>() && g.coin(10)) {
    // "z" never occurs in generated types, so the path stays linear.
    return g.coin(50) ? st::send("z") : st::recv("z");
  }
  return t;
}

}  // namespace

std::pair<SessionType, SessionType> corpus_pair(const CorpusSpec& spec, std::uint64_t index) {
  SessionType p = random_session_type(spec, Role::Client, index);
  Generator g(spec, 3, index);
  if (g.coin(30)) return {p, random_session_type(spec, Role::Server, index)};
  return {p, perturb(dual(p), g, false)};
}

// ---------------------------------------------------------------------------

namespace {

ComplianceGameReport theorem2_on(const SessionType& p, const SessionType& q, const Contract& c, int unroll_depth,
                           bool search_strategy, std::size_t state_limit) {
  ComplianceGameReport r;
  r.bounded = has_recursion(p) || has_recursion(q);
  ComplianceOptions opts;
  opts.state_limit = state_limit;
  if (r.bounded) opts.unroll_depth = unroll_depth;
  r.compliance = check_compliance(p, q, opts);
  r.eager = eager_winning(c, kClient);
  if (r.bounded) r.eager.bounded_depth = unroll_depth;
  r.agree = r.compliance.result != ComplianceVerdict::Result::Indeterminate &&
            r.compliance.compliant() == r.eager.winning;
  if (search_strategy) r.strategy_exists = find_winning_strategy(c, kClient).has_value();
  return r;
}

// Event transition system over histories, explored breadth-first up to the
// first level where some history reaches a cut of the denotation. Histories
// with the same remainder are not merged; that leaves the system bisimilar
// to the remainder-based one.
struct CutEts {
  Lts lts;
  std::optional<std::size_t> cut_level;
};

CutEts explore_until_cut(const EventStructure& es, std::size_t state_limit) {
  IndexedEs ix(es);
  CutEts out;
  std::map<Bits, std::size_t> index;
  std::vector<Bits> level{ix.empty_set()};
  index.emplace(level.front(), 0);
  out.lts.states.push_back("{}");
  for (std::size_t depth = 0; !level.empty(); ++depth) {
    for (const auto& h : level)
      if (ix.horizon_reached(h)) out.cut_level = depth;
    if (out.cut_level) break;
    std::vector<Bits> next;
    for (const auto& h : level) {
      std::size_t from = index.at(h);
      Bits moves = ix.available_set(h);
      for (auto e = moves.find_first(); e != Bits::npos; e = moves.find_next(e)) {
        Bits g = h;
        g.set(e);
        auto [it, fresh] = index.emplace(g, out.lts.states.size());
        if (fresh) {
          if (out.lts.states.size() >= state_limit) throw std::runtime_error("state limit reached");
          out.lts.states.push_back(std::to_string(it->second));
          next.push_back(g);
        }
        out.lts.edges.push_back({from, ix.events[e].label.str(), it->second});
      }
    }
    level = std::move(next);
  }
  return out;
}

BisimCheckReport theorem1_on(const SessionType& p, const SessionType& q, const EventStructure& es,
                           std::size_t state_limit) {
  Lts ts = explore(Configuration{p, q}, Semantics::TurnBased, state_limit);
  if (ts.truncated) throw std::runtime_error("state limit reached");
  BisimCheckReport r;
  r.ts_states = ts.size();
  if (es.horizons().empty()) {
    Ets e = ets(es, state_limit);
    if (e.lts.truncated) throw std::runtime_error("state limit reached");
    r.result = bisim(ts, e.relabelled(es));
    r.ets_states = e.lts.size();
    return r;
  }
  // Only the steps before the nearest cut are meaningful.
  CutEts e = explore_until_cut(es, state_limit);
  r.result = bisim(ts, e.lts, e.cut_level);
  if (e.cut_level) r.result.bound = e.cut_level;
  r.ets_states = e.lts.size();
  return r;
}

}  // namespace

ComplianceGameReport theorem2_check(const SessionType& p, const SessionType& q, int unroll_depth, bool search_strategy,
                              std::size_t state_limit, PartnerMatching matching) {
  Contract c = compose_session_contracts(p, kClient, q, kServer, unroll_depth, matching);
  return theorem2_on(p, q, c, unroll_depth, search_strategy, state_limit);
}

BisimCheckReport theorem1_check(const SessionType& p, const SessionType& q, int unroll_depth,
                              std::size_t state_limit, PartnerMatching matching) {
  require_valid(p);
  require_valid(q);
  return theorem1_on(p, q, denote_pair(p, kClient, q, kServer, unroll_depth, matching), state_limit);
}

bool lemma1_check(const SessionType& p, const SessionType& q, std::size_t state_limit) {
  ComplianceOptions opts;
  opts.state_limit = state_limit;
  auto a = check_compliance(p, q, opts);
  auto b = check_compliance_turn(p, q, opts);
  return a.result == b.result && a.result != ComplianceVerdict::Result::Indeterminate;
}

CorpusSummary run_corpus(const CorpusSpec& spec) {
  auto start = std::chrono::steady_clock::now();
  CorpusSummary s;
  s.spec = spec;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    auto [p, q] = corpus_pair(spec, i);
    ++s.pairs;
    bool recursive = has_recursion(p) || has_recursion(q);
    if (recursive) ++s.recursive_pairs;
    auto fail = [&](const std::string& check, const std::string& detail) {
      s.failures.push_back({i, spec.seed, pretty(p), pretty(q), check, detail});
    };
    try {
      Contract c = compose_session_contracts(p, kClient, q, kServer, spec.unroll_depth, spec.matching);
      auto t2 = theorem2_on(p, q, c, spec.unroll_depth, false, spec.state_limit);
      if (t2.compliance.compliant()) ++s.compliant;
      if (t2.agree)
        ++s.theorem2_agreements;
      else
        fail("theorem2", "compliance=" + to_string(t2.compliance.result) +
                             " eager=" + (t2.eager.winning ? "winning" : "not-winning"));

      if (lemma1_check(p, q, spec.state_limit))
        ++s.lemma1_agreements;
      else
        fail("lemma1", "synchronous and turn-based compliance differ");

      auto t1_start = std::chrono::steady_clock::now();
      auto t1 = theorem1_on(p, q, c.es, spec.state_limit);
      s.theorem1_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t1_start).count();
      if (t1.result.bisimilar)
        ++s.bisim_agreements;
      else
        fail("theorem1", t1.result.bound ? "not bisimilar within " + std::to_string(*t1.result.bound) + " steps"
                                         : "not bisimilar");

      if (spec.check_strategy_search && t2.compliance.compliant()) {
        ++s.strategy_checks;
        if (find_winning_strategy(c, kClient))
          ++s.strategy_agreements;
        else
          fail("strategy", "compliant but no winning strategy found");
      }
    } catch (const std::exception& ex) {
      fail("error", ex.what());
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

std::string to_json(const CorpusSummary& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.spec.seed;
  j["unroll_depth"] = s.spec.unroll_depth;
  j["recursive"] = s.spec.allow_recursion;
  j["linear_labels"] = s.spec.linear_labels;
  j["matching"] = to_string(s.spec.matching);
  j["pairs"] = s.pairs;
  j["recursive_pairs"] = s.recursive_pairs;
  j["compliant"] = s.compliant;
  j["theorem2_agreements"] = s.theorem2_agreements;
  j["lemma1_agreements"] = s.lemma1_agreements;
  j["bisim_agreements"] = s.bisim_agreements;
  j["strategy_checks"] = s.strategy_checks;
  j["strategy_agreements"] = s.strategy_agreements;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : s.failures)
    j["failures"].push_back({{"index", f.index},
                             {"seed", f.seed},
                             {"client", f.client},
                             {"server", f.server},
                             {"check", f.check},
                             {"detail", f.detail}});
  j["seconds"] = s.seconds;
  j["theorem1_seconds"] = s.theorem1_seconds;
  return j.dump(2);
}

std::string to_json(const ComplianceGameReport& r) {
  nlohmann::ordered_json j;
  j["compliance"] = nlohmann::ordered_json::parse(to_json(r.compliance));
  j["eager"] = nlohmann::ordered_json::parse(to_json(r.eager));
  j["agree"] = r.agree;
  j["bounded"] = r.bounded;
  if (r.strategy_exists) j["strategy_exists"] = *r.strategy_exists;
  return j.dump(2);
}

}  // namespace sesgame
