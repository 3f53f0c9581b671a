#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sesgame/bisim.hpp"
#include "sesgame/denote.hpp"
#include "sesgame/game.hpp"
#include "sesgame/opsem.hpp"
#include "sesgame/syntax.hpp"

namespace sesgame {

struct CorpusSpec {
  std::uint64_t seed = 42;
  std::size_t count = 100;
  int max_depth = 4;
  int max_branch = 3;
  bool allow_recursion = false;
  int unroll_depth = 4;
  /// No action name occurs twice along any path of a generated type. The
  /// label-only partner matching of the parallel denotation lets a repeated
  /// name reuse an earlier partner, so unrestricted corpora contain pairs
  /// where the two semantics genuinely differ.
  bool linear_labels = true;
  PartnerMatching matching = PartnerMatching::ByLabel;
  /// Also look for an arbitrary winning strategy when the pair is compliant.
  bool check_strategy_search = true;
  std::size_t state_limit = kDefaultStateLimit;
};

enum class Role { Client, Server };

/// Deterministic random closed, guarded type. `index` selects a stream, so a
/// corpus draws its i-th pair from (seed, i) alone.
SessionType random_session_type(const CorpusSpec& spec, Role role, std::uint64_t index = 0);

/// The i-th corpus pair: a random client, and a server that is either drawn
/// independently or obtained by perturbing the client's dual.
std::pair<SessionType, SessionType> corpus_pair(const CorpusSpec& spec, std::uint64_t index);

/// The dual type: internal and external choices swapped.
SessionType dual(const SessionType& t);

struct ComplianceGameReport {
  ComplianceVerdict compliance;
  WinVerdict eager;
  bool agree = false;
  bool bounded = false;
  /// Filled when requested: whether some winning strategy exists.
  std::optional<bool> strategy_exists;
};

inline const std::string kClient = "A";
inline const std::string kServer = "B";

/// Compliance of p with q against the eager strategy of the client in the
/// composed contract. Recursive pairs are compared with both sides unrolled
/// to `unroll_depth`; outcomes past the cut are ignored on both sides.
ComplianceGameReport theorem2_check(const SessionType& p, const SessionType& q, int unroll_depth,
                              bool search_strategy = false, std::size_t state_limit = kDefaultStateLimit,
                              PartnerMatching matching = PartnerMatching::ByLabel);

struct BisimCheckReport {
  BisimResult result;
  std::size_t ts_states = 0;
  std::size_t ets_states = 0;
};

/// Turn-based system of p || q against the event transition system of the
/// composed denotation. When the denotation was cut, only as many steps as it
/// takes to reach the nearest cut are compared.
BisimCheckReport theorem1_check(const SessionType& p, const SessionType& q, int unroll_depth,
                              std::size_t state_limit = kDefaultStateLimit,
                              PartnerMatching matching = PartnerMatching::ByLabel);

/// Both compliance checkers give the same result.
bool lemma1_check(const SessionType& p, const SessionType& q, std::size_t state_limit = kDefaultStateLimit);

struct CorpusFailure {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string client;
  std::string server;
  std::string check;  // "theorem1", "theorem2", "lemma1", "strategy", "error"
  std::string detail;
};

struct CorpusSummary {
  CorpusSpec spec;
  std::size_t pairs = 0;
  std::size_t recursive_pairs = 0;
  std::size_t compliant = 0;
  std::size_t theorem2_agreements = 0;
  std::size_t lemma1_agreements = 0;
  std::size_t bisim_agreements = 0;
  std::size_t strategy_checks = 0;
  std::size_t strategy_agreements = 0;
  std::vector<CorpusFailure> failures;
  double seconds = 0;
  /// Time spent in the bisimulation checks alone.
  double theorem1_seconds = 0;
};

CorpusSummary run_corpus(const CorpusSpec& spec);

std::string to_json(const CorpusSummary& s);
std::string to_json(const ComplianceGameReport& r);

}  // namespace sesgame
