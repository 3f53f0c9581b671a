#pragma once

// Worked examples with their expected denotations, transcribed by hand.

#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sesgame/event_structure.hpp"

namespace fixture {

inline const char* const kClient = "!a (+) !b.!a";
inline const char* const kServer = "?a.?b + ?b.?a + ?c";
inline const char* const kBadClient = "!a.!c (+) !b";
inline const char* const kBadServer = "?a + ?b";
inline const char* const kPayClient = "!payCash (+) !payCC";
inline const char* const kPayServer = "?payCash";

inline sesgame::EventId ev(const std::string& s) { return sesgame::EventId::parse(s); }

inline sesgame::EventSet evs(std::initializer_list<const char*> names) {
  sesgame::EventSet out;
  for (const char* n : names) out.insert(ev(n));
  return out;
}

using Gen = std::pair<sesgame::EventSet, sesgame::EventId>;

inline Gen gen(std::initializer_list<const char*> premise, const char* target) { return {evs(premise), ev(target)}; }

inline std::set<Gen> generators_of(const sesgame::EventStructure& es) {
  std::set<Gen> out;
  for (const auto& g : es.enablings()) out.insert({g.premise, g.target});
  return out;
}

inline std::set<std::pair<sesgame::EventId, sesgame::EventId>> conflict_pairs(
    std::initializer_list<std::pair<const char*, const char*>> pairs) {
  std::set<std::pair<sesgame::EventId, sesgame::EventId>> out;
  for (const auto& [a, b] : pairs) {
    auto x = ev(a), y = ev(b);
    out.insert(x < y ? std::pair{x, y} : std::pair{y, x});
  }
  return out;
}

inline const std::set<Gen>& client_generators() {
  static const std::set<Gen> g{gen({}, "e1"), gen({}, "e5"), gen({"e1"}, "e3"), gen({"e5"}, "e7"),
                               gen({"e7"}, "e9")};
  return g;
}

inline const std::set<Gen>& server_generators() {
  static const std::set<Gen> g{gen({}, "e2"),        gen({}, "e8"),          gen({}, "e14"),
                               gen({"e2"}, "e4"),    gen({"e4"}, "e6"),      gen({"e8"}, "e10"),
                               gen({"e10"}, "e12"),  gen({"e14"}, "e16")};
  return g;
}

inline const std::set<Gen>& composed_generators() {
  static const std::set<Gen> g{
      gen({}, "e1"),                   gen({}, "e5"),
      gen({"e1", "e2"}, "e3"),         gen({"e1", "e10"}, "e3"),
      gen({"e5", "e8"}, "e7"),         gen({"e5", "e4"}, "e7"),
      gen({"e2", "e7"}, "e9"),         gen({"e7", "e10"}, "e9"),
      gen({"e1"}, "e2"),               gen({"e7"}, "e2"),
      gen({"e1", "e2", "e5"}, "e4"),   gen({"e7", "e2", "e5"}, "e4"),
      gen({"e4", "e5"}, "e6"),         gen({"e5"}, "e8"),
      gen({"e8", "e5", "e1"}, "e10"),  gen({"e8", "e5", "e7"}, "e10"),
      gen({"e10", "e1"}, "e12"),       gen({"e10", "e7"}, "e12")};
  return g;
}

}  // namespace fixture
