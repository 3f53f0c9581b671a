#include "sesgame/game.hpp"

#include <deque>
#include <functional>
#include <json.hpp>
#include <stdexcept>

#include "sesgame/denote.hpp"

namespace sesgame {

void check_contract(const Contract& c) {
  for (const auto& g : c.es.enablings()) {
    const auto& owner = c.es.event(g.target).participant;
    if (!c.payoffs.count(owner)) throw std::invalid_argument("contract: no payoff for participant " + owner);
  }
}

std::string strategy_owner(const Strategy& s) {
  return std::visit([](const auto& x) { return x.participant; }, s);
}

bool composable(const Contract& a, const Contract& b) {
  for (const auto& [who, kind] : a.payoffs)
    if (b.payoffs.count(who)) return false;
  return true;
}

Contract compose_union(const Contract& a, const Contract& b) {
  if (!composable(a, b)) throw std::invalid_argument("contracts assign payoffs to the same participant");
  Contract out{es_union(a.es, b.es), a.payoffs};
  out.payoffs.insert(b.payoffs.begin(), b.payoffs.end());
  return out;
}

Contract contract_of(const SessionType& p, const std::string& who, int unroll_depth) {
  return {denote(p, {who, Participant::Parity::Odd}, {}, unroll_depth), {{who, PayoffKind::Success}}};
}

Contract compose_session_contracts(const SessionType& p, const std::string& a, const SessionType& q,
                                   const std::string& b, int unroll_depth, PartnerMatching matching) {
  if (a == b) throw std::invalid_argument("cannot compose two contracts of participant " + a);
  require_valid(p);
  require_valid(q);
  return {denote_pair(p, a, q, b, unroll_depth, matching), {{a, PayoffKind::Success}, {b, PayoffKind::Success}}};
}

EventSet events_of(const Play& sigma) { return EventSet(sigma.begin(), sigma.end()); }

bool is_play(const EventStructure& es, const Play& sigma) {
  EventSet h;
  for (const auto& e : sigma) {
    if (!es.contains(e) || !available(es, h, e)) return false;
    h.insert(e);
  }
  return true;
}

namespace {

void require_play(const EventStructure& es, const Play& sigma) {
  for (const auto& e : sigma)
    if (!es.contains(e)) throw UnknownEvent(e);
  if (!is_play(es, sigma)) throw std::invalid_argument("not a play of the contract");
}

EventSet eager_moves(const EventStructure& es, const EventSet& history, const std::string& who) {
  EventSet out;
  for (const auto& [id, ev] : es.events())
    if (ev.participant == who && available(es, history, id)) out.insert(id);
  return out;
}

EventSet prescribed_at(const Strategy& s, const Contract& c, const EventSet& history) {
  if (auto e = std::get_if<EagerStrategy>(&s)) return eager_moves(c.es, history, e->participant);
  const auto& table = std::get<ExplicitStrategy>(s).table;
  auto it = table.find(history);
  return it == table.end() ? EventSet{} : it->second;
}

std::set<std::string> participants(const Contract& c) {
  std::set<std::string> out;
  for (const auto& [who, kind] : c.payoffs) out.insert(who);
  for (const auto& [id, ev] : c.es.events()) out.insert(ev.participant);
  return out;
}

}  // namespace

EventSet prescribed(const Strategy& s, const Contract& c, const Play& sigma) {
  return prescribed_at(s, c, events_of(sigma));
}

bool conforms(const Contract& c, const Play& sigma, const Strategy& s, const std::string& who) {
  EventSet h;
  for (const auto& e : sigma) {
    if (c.es.event(e).participant == who && !prescribed_at(s, c, h).count(e)) return false;
    h.insert(e);
  }
  return true;
}

bool is_fair(const Contract& c, const Play& sigma, const Strategy& s) {
  std::vector<EventSet> prescriptions;
  EventSet h;
  prescriptions.push_back(prescribed_at(s, c, h));
  for (const auto& e : sigma) {
    h.insert(e);
    prescriptions.push_back(prescribed_at(s, c, h));
  }
  const std::size_t n = sigma.size();
  for (std::size_t i = 0; i <= n; ++i) {
    for (const auto& e : prescriptions[i]) {
      bool always = true;
      for (std::size_t j = i; j <= n && always; ++j) always = prescriptions[j].count(e) != 0;
      if (!always) continue;
      bool occurs = false;
      for (std::size_t k = i; k < n && !occurs; ++k) occurs = sigma[k] == e;
      if (!occurs) return false;
    }
  }
  return true;
}

bool innocent(const EventStructure& es, const Play& sigma, const std::string& who) {
  EventSet h;
  for (std::size_t i = 0; i <= sigma.size(); ++i) {
    for (const auto& e : eager_moves(es, h, who)) {
      bool answered = false;
      for (std::size_t j = i; j < sigma.size() && !answered; ++j)
        answered = sigma[j] == e || es.in_conflict(sigma[j], e);
      if (!answered) return false;
    }
    if (i < sigma.size()) h.insert(sigma[i]);
  }
  return true;
}

bool culpable_at(const IndexedEs& es, const Bits& history, const std::string& who) {
  for (std::size_t e = 0; e < es.size(); ++e)
    if (es.events[e].participant == who && es.available(history, e)) return true;
  return false;
}

bool payoff_satisfied(const Contract& c, const EventSet& history, const std::string& who) {
  if (!c.payoffs.count(who)) throw std::invalid_argument("undefined payoff for participant " + who);
  for (const auto& e : history) {
    const auto& ev = c.es.event(e);
    if (ev.participant == who && ev.label.is_tick()) return true;
  }
  return false;
}

bool winning_play(const Contract& c, const Play& sigma, const std::string& who) {
  if (!c.payoffs.count(who)) throw std::invalid_argument("undefined payoff for participant " + who);
  require_play(c.es, sigma);
  if (!innocent(c.es, sigma, who)) return false;
  bool other_culpable = false;
  for (const auto& p : participants(c))
    if (p != who && !innocent(c.es, sigma, p)) other_culpable = true;
  return other_culpable || payoff_satisfied(c, events_of(sigma), who);
}

// ---------------------------------------------------------------------------

namespace {

struct Arena {
  const Contract& c;
  IndexedEs es;
  std::string who;
  std::vector<std::string> others;
  Bits own;
  Bits own_ticks;

  Arena(const Contract& contract, const std::string& participant)
      : c(contract), es(contract.es), who(participant), own(es.size()), own_ticks(es.size()) {
    if (!c.payoffs.count(who)) throw std::invalid_argument("undefined payoff for participant " + who);
    check_contract(c);
    for (const auto& p : participants(c))
      if (p != who) others.push_back(p);
    for (std::size_t e = 0; e < es.size(); ++e) {
      if (es.events[e].participant != who) continue;
      own.set(e);
      if (es.events[e].label.is_tick()) own_ticks.set(e);
    }
  }

  // Outcome at a point where `who` has stopped moving.
  bool wins_at(const Bits& h) const {
    if (culpable_at(es, h, who)) return false;
    for (const auto& p : others)
      if (culpable_at(es, h, p)) return true;
    return own_ticks.intersects(h);
  }

  Play replay(const std::map<Bits, std::pair<Bits, std::size_t>>& parent, Bits h) const {
    Play out;
    while (h.any()) {
      const auto& [prev, e] = parent.at(h);
      out.push_back(es.events[e].id);
      h = prev;
    }
    return {out.rbegin(), out.rend()};
  }
};

WinVerdict explore(const Arena& a, const std::function<Bits(const Bits&)>& prescription, const std::string& kind) {
  WinVerdict v;
  v.participant = a.who;
  v.strategy_kind = kind;
  v.winning = true;
  std::map<Bits, std::pair<Bits, std::size_t>> parent;
  std::set<Bits> seen;
  std::deque<Bits> queue;
  Bits root = a.es.empty_set();
  seen.insert(root);
  queue.push_back(root);
  while (!queue.empty()) {
    Bits h = std::move(queue.front());
    queue.pop_front();
    if (a.es.horizon_reached(h)) {
      ++v.horizon_stops;
      continue;
    }
    Bits moves = a.es.available_set(h);
    Bits chosen = prescription(h);
    if (!chosen.is_subset_of(moves))
      throw std::invalid_argument("strategy prescribes events that are not moves at " +
                                  std::to_string(h.count()) + "-event history");
    if (chosen.none() && !a.wins_at(h)) {
      v.winning = false;
      v.counterexample = a.replay(parent, h);
      break;
    }
    Bits next = (moves - a.own) | chosen;
    for (auto e = next.find_first(); e != Bits::npos; e = next.find_next(e)) {
      Bits g = h;
      g.set(e);
      if (!seen.insert(g).second) continue;
      parent.emplace(g, std::pair{h, e});
      queue.push_back(std::move(g));
    }
  }
  v.states = seen.size();
  return v;
}

}  // namespace

WinVerdict eager_winning(const Contract& c, const std::string& who) {
  Arena a(c, who);
  return explore(a, [&](const Bits& h) { return a.es.available_set(h) & a.own; }, "eager");
}

WinVerdict strategy_winning(const Contract& c, const Strategy& s) {
  Arena a(c, strategy_owner(s));
  if (std::holds_alternative<EagerStrategy>(s)) return eager_winning(c, a.who);
  const auto& table = std::get<ExplicitStrategy>(s).table;
  return explore(
      a,
      [&](const Bits& h) {
        auto it = table.find(a.es.to_set(h));
        return it == table.end() ? a.es.empty_set() : a.es.to_bits(it->second);
      },
      "synthesized");
}

std::optional<ExplicitStrategy> find_winning_strategy(const Contract& c, const std::string& who) {
  Arena a(c, who);
  constexpr std::size_t kMaxChoice = 20;
  std::map<Bits, bool> memo;
  std::map<Bits, Bits> choice;

  std::function<bool(const Bits&)> win = [&](const Bits& h) -> bool {
    if (auto it = memo.find(h); it != memo.end()) return it->second;
    if (a.es.horizon_reached(h)) return memo[h] = true;
    Bits moves = a.es.available_set(h);
    Bits mine = moves & a.own;
    Bits theirs = moves - a.own;
    std::vector<std::size_t> idx;
    for (auto e = mine.find_first(); e != Bits::npos; e = mine.find_next(e)) idx.push_back(e);
    if (idx.size() > kMaxChoice) throw std::runtime_error("strategy search: too many simultaneous choices");

    auto successors_win = [&](const Bits& next) {
      for (auto e = next.find_first(); e != Bits::npos; e = next.find_next(e)) {
        Bits g = h;
        g.set(e);
        if (!win(g)) return false;
      }
      return true;
    };
    // Larger prescriptions first; the empty one last.
    for (std::size_t mask = (std::size_t{1} << idx.size()); mask-- > 0;) {
      Bits chosen = a.es.empty_set();
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (mask & (std::size_t{1} << k)) chosen.set(idx[k]);
      if (chosen.none() && !a.wins_at(h)) continue;
      if (!successors_win(theirs | chosen)) continue;
      choice[h] = chosen;
      return memo[h] = true;
    }
    return memo[h] = false;
  };

  Bits root = a.es.empty_set();
  if (!win(root)) return std::nullopt;

  ExplicitStrategy s{who, {}};
  std::set<Bits> seen{root};
  std::deque<Bits> queue{root};
  while (!queue.empty()) {
    Bits h = std::move(queue.front());
    queue.pop_front();
    auto it = choice.find(h);
    if (it == choice.end()) continue;  // past a recursion cut
    if (it->second.any()) s.table.emplace(a.es.to_set(h), a.es.to_set(it->second));
    Bits next = (a.es.available_set(h) - a.own) | it->second;
    for (auto e = next.find_first(); e != Bits::npos; e = next.find_next(e)) {
      Bits g = h;
      g.set(e);
      if (seen.insert(g).second) queue.push_back(std::move(g));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json id_list(const EventSet& s) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& e : s) j.push_back(e.str());
  return j;
}

nlohmann::ordered_json table_json(const ExplicitStrategy& s) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& [prefix, moves] : s.table) j.push_back({{"prefix", id_list(prefix)}, {"prescribe", id_list(moves)}});
  return j;
}

}  // namespace

std::string to_json(const WinVerdict& v) {
  nlohmann::ordered_json j;
  j["participant"] = v.participant;
  j["strategy"] = v.strategy_kind;
  j["winning"] = v.winning;
  j["counterexample"] = nlohmann::ordered_json::array();
  for (const auto& e : v.counterexample) j["counterexample"].push_back(e.str());
  j["bounded_depth"] = v.bounded_depth ? nlohmann::ordered_json(*v.bounded_depth) : nlohmann::ordered_json();
  if (v.strategy) j["prescriptions"] = table_json(*v.strategy);
  if (v.horizon_stops) j["cut_points"] = v.horizon_stops;
  return j.dump(2);
}

std::string to_json(const ExplicitStrategy& s) {
  nlohmann::ordered_json j;
  j["participant"] = s.participant;
  j["prescriptions"] = table_json(s);
  return j.dump(2);
}

}  // namespace sesgame
