#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sesgame/denote.hpp"
#include "sesgame/event_structure.hpp"
#include "sesgame/syntax.hpp"

namespace sesgame {

/// Payoff kinds. The only one needed here: a finite play is positive for a
/// participant iff it contains one of her ✓-labelled events; infinite plays
/// are always positive.
enum class PayoffKind { Success };

/// Partial map from participants to payoffs (absent = undefined).
using PayoffSpec = std::map<std::string, PayoffKind>;

struct Contract {
  EventStructure es;
  PayoffSpec payoffs;
};

/// Throws std::invalid_argument if some participant with an enabled event has no payoff.
void check_contract(const Contract& c);

using Play = std::vector<EventId>;

struct EagerStrategy {
  std::string participant;
};

/// Prescriptions keyed by the event set of the play prefix; missing keys prescribe nothing.
struct ExplicitStrategy {
  std::string participant;
  std::map<EventSet, EventSet> table;
};

using Strategy = std::variant<EagerStrategy, ExplicitStrategy>;

std::string strategy_owner(const Strategy& s);

bool composable(const Contract& a, const Contract& b);

/// Componentwise union of contracts with disjoint payoff domains (no
/// synchronisation enablings are added). Throws if not composable.
Contract compose_union(const Contract& a, const Contract& b);

/// The contract of a single session type: its denotation plus a success payoff.
Contract contract_of(const SessionType& p, const std::string& who, int unroll_depth);

/// Contract for the pair: event structure from the parallel denotation rule,
/// success payoffs for both participants. Throws if a == b.
Contract compose_session_contracts(const SessionType& p, const std::string& a, const SessionType& q,
                                   const std::string& b, int unroll_depth,
                                   PartnerMatching matching = PartnerMatching::ByLabel);

bool is_play(const EventStructure& es, const Play& sigma);

EventSet events_of(const Play& sigma);

/// Events the strategy prescribes after sigma. The eager strategy prescribes
/// every event of its owner that is currently a move.
EventSet prescribed(const Strategy& s, const Contract& c, const Play& sigma);

/// Every event of `who` in sigma was prescribed at its prefix.
bool conforms(const Contract& c, const Play& sigma, const Strategy& s, const std::string& who);

/// Fairness evaluated with its quantifiers as written: every event prescribed
/// at all positions from some i to the end occurs at or after i.
bool is_fair(const Contract& c, const Play& sigma, const Strategy& s);

/// Every event of `who` that becomes a move at some prefix is later either
/// performed or discarded by a conflicting event.
bool innocent(const EventStructure& es, const Play& sigma, const std::string& who);

/// Culpable at the end of a finite play: some own event is still a move.
bool culpable_at(const IndexedEs& es, const Bits& history, const std::string& who);

bool payoff_satisfied(const Contract& c, const EventSet& history, const std::string& who);

/// Positive payoff with everyone innocent, or own innocence with someone else culpable.
bool winning_play(const Contract& c, const Play& sigma, const std::string& who);

struct WinVerdict {
  std::string participant;
  std::string strategy_kind;  // "eager" or "synthesized"
  bool winning = false;
  Play counterexample;
  std::optional<ExplicitStrategy> strategy;
  std::optional<int> bounded_depth;
  /// Stopping points skipped because they lie past an unrolling cut.
  std::size_t horizon_stops = 0;
  std::size_t states = 0;
};

/// Decides whether the eager strategy of `who` wins every fair conforming play.
/// Stopping points past a recursion cut are skipped and counted.
WinVerdict eager_winning(const Contract& c, const std::string& who);

/// Same check for an arbitrary strategy.
WinVerdict strategy_winning(const Contract& c, const Strategy& s);

/// AND-OR search for any winning strategy of `who`; nullopt if none exists.
std::optional<ExplicitStrategy> find_winning_strategy(const Contract& c, const std::string& who);

std::string to_json(const WinVerdict& v);
std::string to_json(const ExplicitStrategy& s);

}  // namespace sesgame
