#pragma once

#include <map>
#include <string>

#include "sesgame/event_structure.hpp"
#include "sesgame/syntax.hpp"

namespace sesgame {

/// Who owns the events of a denotation. The first participant of a pair gets
/// odd event numbers (e1, e3, ...), the second even ones (e2, e4, ...).
struct Participant {
  enum class Parity { Odd, Even };
  std::string name;
  Parity parity = Parity::Odd;
};

/// Variable environment: each recursion variable maps to the structure its
/// occurrences denote.
using DenoteEnv = std::map<std::string, EventStructure>;

inline constexpr int kDefaultUnrollDepth = 6;

/// Event structure of a closed (or env-closed) session type.
///
/// Events are numbered by a pre-order walk over prefix and success positions.
/// Each recursion is approximated by `unroll_depth` applications of its
/// defining functional, starting from the empty structure; events of the copy
/// reached through variable occurrence v carry v in their unrolling path.
EventStructure denote(const SessionType& t, const Participant& who, const DenoteEnv& env = {},
                      int unroll_depth = kDefaultUnrollDepth);

/// How the parallel rule picks the partner of an event.
///
/// ByLabel: any event of the other side carrying the co-action (the rule as
/// usually stated). A partner can then be reused when an action name repeats
/// along a path, e.g. both receives of ?a.?a match the single send of !a.
///
/// ByPosition: additionally, the n-th communication of one side only matches
/// the n-th communication of the other. Requires each side to be sequential:
/// every event has exactly one generator, with at most one premise event.
enum class PartnerMatching { ByLabel, ByPosition };

/// Parallel composition of two structures over disjoint events. Every
/// generator is extended with a co-labelled partner for each premise event;
/// input targets additionally need a partner emitting the matching output.
EventStructure denote_par(const EventStructure& left, const EventStructure& right,
                          PartnerMatching matching = PartnerMatching::ByLabel);

/// depth-fold approximant of the fixpoint for `rec var . body`.
EventStructure fix_approx(const std::string& var, const SessionType& body, const Participant& who,
                          const DenoteEnv& env, int depth);

/// denote_par(denote(p, a), denote(q, b)).
EventStructure denote_pair(const SessionType& p, const std::string& a, const SessionType& q, const std::string& b,
                           int unroll_depth = kDefaultUnrollDepth,
                           PartnerMatching matching = PartnerMatching::ByLabel);

std::string to_string(PartnerMatching m);
PartnerMatching matching_from_string(const std::string& s);

}  // namespace sesgame
