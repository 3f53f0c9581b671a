#pragma once

#include <boost/dynamic_bitset.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sesgame/lts.hpp"
#include "sesgame/syntax.hpp"

namespace sesgame {

/// Event name e<base>, optionally followed by the unrolling path of the
/// recursion copy it belongs to: e<base>_<v1>_<v2>...
struct EventId {
  int base = 0;
  std::vector<int> path;

  std::string str() const;
  static EventId parse(const std::string& s);
  auto operator<=>(const EventId&) const = default;
};

struct Event {
  EventId id;
  std::string participant;
  ActionLabel label;
};

using EventSet = std::set<EventId>;

/// A generator X |- e. The saturated enabling relation is
/// { (Y, e) | CF(Y), exists generator (X, e) with X subset of Y }.
struct Enabling {
  EventSet premise;
  EventId target;
  auto operator<=>(const Enabling&) const = default;
};

class UnknownEvent : public std::out_of_range {
 public:
  explicit UnknownEvent(const EventId& id) : std::out_of_range("unknown event " + id.str()) {}
};

/// Labelled event structure with a finite generator basis for enabling.
///
/// `horizons` lists premise sets at which a finite recursion approximant was
/// cut: once one is contained in the history, the participant would continue
/// with events the approximant does not contain.
class EventStructure {
 public:
  void add_event(Event e);
  void add_conflict(const EventId& a, const EventId& b);
  void add_enabling(EventSet premise, const EventId& target);
  void add_horizon(EventSet premise);

  const std::map<EventId, Event>& events() const { return events_; }
  /// Pairs stored with first < second.
  const std::set<std::pair<EventId, EventId>>& conflicts() const { return conflicts_; }
  const std::set<Enabling>& enablings() const { return enablings_; }
  const std::set<EventSet>& horizons() const { return horizons_; }

  bool contains(const EventId& id) const { return events_.count(id) != 0; }
  const Event& event(const EventId& id) const;
  bool in_conflict(const EventId& a, const EventId& b) const;
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  /// Deterministic text form used for state dedup.
  std::string canonical() const;

  friend bool operator==(const EventStructure& a, const EventStructure& b);

 private:
  std::map<EventId, Event> events_;
  std::set<std::pair<EventId, EventId>> conflicts_;
  std::set<Enabling> enablings_;
  std::set<EventSet> horizons_;
};

/// CF(xs). Throws UnknownEvent for events outside es.
bool conflict_free(const EventStructure& es, const EventSet& xs);

/// Saturated enabling: some generator (X0, e) has X0 subset of history.
/// Precondition CF(history).
bool enabled(const EventStructure& es, const EventSet& history, const EventId& e);

/// Enabled, not yet fired, and not in conflict with the history: e is a move
/// of the transition system after `history`.
bool available(const EventStructure& es, const EventSet& history, const EventId& e);

/// E[e]: e and everything in conflict with it removed; generators whose
/// target is removed or whose premise conflicts with e are dropped; e is
/// subtracted from the surviving premises.
EventStructure remainder(const EventStructure& es, const EventId& e);

struct Ets {
  Lts lts;                              // edges labelled by event id
  std::vector<EventStructure> states;   // remainder at each state
  std::vector<std::vector<EventId>> edge_events;  // parallel to lts.edges (single id each)

  /// Same graph with edges relabelled by the events' actions.
  Lts relabelled(const EventStructure& root) const;
  /// States at which some horizon premise has been reached.
  std::vector<bool> horizon_states() const;
};

inline constexpr std::size_t kDefaultEtsStateLimit = 100000;

/// Transition system E --e--> E[e] for every e with an empty-premise generator.
Ets ets(const EventStructure& es, std::size_t state_limit = kDefaultEtsStateLimit);

/// Approximation order on the saturated relations.
bool es_leq(const EventStructure& a, const EventStructure& b);

/// Componentwise union of a chain increasing under es_leq. Throws
/// std::invalid_argument if the input is not a chain.
EventStructure es_lub(const std::vector<EventStructure>& chain);

/// Plain union of two structures over disjoint events (no synchronisation).
EventStructure es_union(const EventStructure& a, const EventStructure& b);

std::string to_json(const EventStructure& es);
EventStructure es_from_json(const std::string& text);
/// Event-labelled transition system as Graphviz, edges "e<i> / label".
std::string ets_to_dot(const Ets& t, const EventStructure& root, const std::string& title);

// ---------------------------------------------------------------------------
// Bitset view for search-heavy code (plays, strategies).

using Bits = boost::dynamic_bitset<>;

struct IndexedEs {
  std::vector<Event> events;
  std::map<EventId, std::size_t> index;
  std::vector<Bits> conflicts;                      // per event
  /// Premises as index lists, per target event. Premises are small while
  /// composed structures can have millions of them.
  std::vector<std::vector<std::vector<std::uint32_t>>> generators;
  std::vector<Bits> horizons;

  explicit IndexedEs(const EventStructure& es);

  std::size_t size() const { return events.size(); }
  Bits empty_set() const { return Bits(events.size()); }
  Bits to_bits(const EventSet& s) const;
  EventSet to_set(const Bits& b) const;

  bool conflict_free(const Bits& xs) const;
  bool enabled(const Bits& history, std::size_t e) const;
  bool available(const Bits& history, std::size_t e) const;
  Bits available_set(const Bits& history) const;
  bool horizon_reached(const Bits& history) const;
};

}  // namespace sesgame
