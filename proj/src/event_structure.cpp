#include "sesgame/event_structure.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

namespace sesgame {

std::string EventId::str() const {
  std::string s = "e" + std::to_string(base);
  for (int p : path) s += "_" + std::to_string(p);
  return s;
}

EventId EventId::parse(const std::string& s) {
  if (s.size() < 2 || s[0] != 'e') throw std::invalid_argument("bad event id '" + s + "'");
  EventId id;
  std::size_t pos = 1;
  auto number = [&]() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("bad event id '" + s + "'");
    return std::stoi(s.substr(start, pos - start));
  };
  id.base = number();
  while (pos < s.size()) {
    if (s[pos] != '_') throw std::invalid_argument("bad event id '" + s + "'");
    ++pos;
    id.path.push_back(number());
  }
  return id;
}

// ---------------------------------------------------------------------------

void EventStructure::add_event(Event e) {
  auto id = e.id;
  events_.insert_or_assign(id, std::move(e));
}

void EventStructure::add_conflict(const EventId& a, const EventId& b) {
  if (a == b) throw std::invalid_argument("conflict must be irreflexive: " + a.str());
  if (!contains(a)) throw UnknownEvent(a);
  if (!contains(b)) throw UnknownEvent(b);
  conflicts_.insert(a < b ? std::pair{a, b} : std::pair{b, a});
}

void EventStructure::add_enabling(EventSet premise, const EventId& target) {
  if (!contains(target)) throw UnknownEvent(target);
  for (const auto& p : premise)
    if (!contains(p)) throw UnknownEvent(p);
  enablings_.insert({std::move(premise), target});
}

void EventStructure::add_horizon(EventSet premise) {
  for (const auto& p : premise)
    if (!contains(p)) throw UnknownEvent(p);
  horizons_.insert(std::move(premise));
}

const Event& EventStructure::event(const EventId& id) const {
  auto it = events_.find(id);
  if (it == events_.end()) throw UnknownEvent(id);
  return it->second;
}

bool EventStructure::in_conflict(const EventId& a, const EventId& b) const {
  return conflicts_.count(a < b ? std::pair{a, b} : std::pair{b, a}) != 0;
}

namespace {
std::string set_str(const EventSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s) {
    if (!first) out += ",";
    first = false;
    out += e.str();
  }
  return out + "}";
}
}  // namespace

std::string EventStructure::canonical() const {
  std::string out = "E:";
  for (const auto& [id, e] : events_) out += id.str() + "/" + e.participant + "/" + e.label.str() + " ";
  out += "#:";
  for (const auto& [a, b] : conflicts_) out += a.str() + "#" + b.str() + " ";
  out += "|-:";
  for (const auto& g : enablings_) out += set_str(g.premise) + ">" + g.target.str() + " ";
  out += "H:";
  for (const auto& h : horizons_) out += set_str(h) + " ";
  return out;
}

bool operator==(const EventStructure& a, const EventStructure& b) {
  if (a.events_.size() != b.events_.size()) return false;
  for (auto i = a.events_.begin(), j = b.events_.begin(); i != a.events_.end(); ++i, ++j) {
    if (i->first != j->first || i->second.participant != j->second.participant ||
        i->second.label != j->second.label)
      return false;
  }
  return a.conflicts_ == b.conflicts_ && a.enablings_ == b.enablings_ && a.horizons_ == b.horizons_;
}

// ---------------------------------------------------------------------------

bool conflict_free(const EventStructure& es, const EventSet& xs) {
  for (const auto& x : xs)
    if (!es.contains(x)) throw UnknownEvent(x);
  for (auto i = xs.begin(); i != xs.end(); ++i)
    for (auto j = std::next(i); j != xs.end(); ++j)
      if (es.in_conflict(*i, *j)) return false;
  return true;
}

bool enabled(const EventStructure& es, const EventSet& history, const EventId& e) {
  for (const auto& g : es.enablings()) {
    if (g.target != e) continue;
    if (std::includes(history.begin(), history.end(), g.premise.begin(), g.premise.end())) return true;
  }
  return false;
}

bool available(const EventStructure& es, const EventSet& history, const EventId& e) {
  if (history.count(e)) return false;
  for (const auto& h : history)
    if (es.in_conflict(h, e)) return false;
  return enabled(es, history, e);
}

EventStructure remainder(const EventStructure& es, const EventId& e) {
  if (!es.contains(e)) throw UnknownEvent(e);
  auto gone = [&](const EventId& x) { return x == e || es.in_conflict(x, e); };
  auto premise_ok = [&](const EventSet& premise) {
    // CF(X u {e})
    for (auto i = premise.begin(); i != premise.end(); ++i) {
      if (es.in_conflict(*i, e)) return false;
      for (auto j = std::next(i); j != premise.end(); ++j)
        if (es.in_conflict(*i, *j)) return false;
    }
    return true;
  };

  EventStructure out;
  for (const auto& [id, ev] : es.events())
    if (!gone(id)) out.add_event(ev);
  for (const auto& [a, b] : es.conflicts())
    if (!gone(a) && !gone(b)) out.add_conflict(a, b);
  for (const auto& g : es.enablings()) {
    if (gone(g.target) || !premise_ok(g.premise)) continue;
    EventSet p = g.premise;
    p.erase(e);
    out.add_enabling(std::move(p), g.target);
  }
  for (const auto& h : es.horizons()) {
    if (!premise_ok(h)) continue;
    EventSet p = h;
    p.erase(e);
    out.add_horizon(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------

Ets ets(const EventStructure& es, std::size_t state_limit) {
  if (state_limit == 0) throw std::invalid_argument("state limit must be positive");
  Ets t;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](EventStructure s) -> std::optional<std::size_t> {
    std::string k = s.canonical();
    if (auto it = index.find(k); it != index.end()) return it->second;
    if (t.states.size() >= state_limit) {
      t.lts.truncated = true;
      return std::nullopt;
    }
    index.emplace(k, t.states.size());
    t.states.push_back(std::move(s));
    t.lts.states.push_back(std::move(k));
    return t.states.size() - 1;
  };
  add(es);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    std::vector<EventId> moves;
    for (const auto& g : t.states[i].enablings())
      if (g.premise.empty() && (moves.empty() || moves.back() != g.target)) moves.push_back(g.target);
    moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
    for (const auto& m : moves) {
      auto to = add(remainder(t.states[i], m));
      if (!to) continue;
      t.lts.edges.push_back({i, m.str(), *to});
      t.edge_events.push_back({m});
    }
  }
  return t;
}

Lts Ets::relabelled(const EventStructure& root) const {
  Lts out = lts;
  for (std::size_t i = 0; i < out.edges.size(); ++i) out.edges[i].label = root.event(edge_events[i].front()).label.str();
  return out;
}

std::vector<bool> Ets::horizon_states() const {
  std::vector<bool> out(states.size(), false);
  for (std::size_t i = 0; i < states.size(); ++i)
    for (const auto& h : states[i].horizons())
      if (h.empty()) out[i] = true;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool subset(const EventSet& a, const EventSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

bool within(const EventStructure& es, const EventSet& s) {
  return std::all_of(s.begin(), s.end(), [&](const EventId& x) { return es.contains(x); });
}

bool cf(const EventStructure& es, const EventSet& xs) {
  for (auto i = xs.begin(); i != xs.end(); ++i)
    for (auto j = std::next(i); j != xs.end(); ++j)
      if (es.in_conflict(*i, *j)) return false;
  return true;
}

bool has_generator_below(const EventStructure& es, const EventSet& xs, const EventId& target) {
  for (const auto& g : es.enablings())
    if (g.target == target && subset(g.premise, xs)) return true;
  return false;
}

}  // namespace

bool es_leq(const EventStructure& a, const EventStructure& b) {
  for (const auto& [id, ev] : a.events()) {
    if (!b.contains(id) || b.event(id).label != ev.label) return false;
  }
  for (const auto& c : a.conflicts())
    if (!b.conflicts().count(c)) return false;
  // Saturated inclusion: every CF superset of an a-generator is enabled in b.
  for (const auto& g : a.enablings()) {
    if (!cf(a, g.premise)) continue;
    if (!cf(b, g.premise) || !has_generator_below(b, g.premise, g.target)) return false;
  }
  // Conflict reflection on common events.
  for (const auto& [x, y] : b.conflicts())
    if (a.contains(x) && a.contains(y) && !a.in_conflict(x, y)) return false;
  // Enabling reflection for X within a's events.
  for (const auto& g : b.enablings()) {
    if (!a.contains(g.target) || !within(a, g.premise) || !cf(b, g.premise)) continue;
    if (!has_generator_below(a, g.premise, g.target)) return false;
  }
  return true;
}

EventStructure es_union(const EventStructure& a, const EventStructure& b) {
  EventStructure out = a;
  for (const auto& [id, ev] : b.events()) {
    if (out.contains(id) && out.event(id).label != ev.label)
      throw std::invalid_argument("label clash on " + id.str());
    out.add_event(ev);
  }
  for (const auto& [x, y] : b.conflicts()) out.add_conflict(x, y);
  for (const auto& g : b.enablings()) out.add_enabling(g.premise, g.target);
  for (const auto& h : b.horizons()) out.add_horizon(h);
  return out;
}

EventStructure es_lub(const std::vector<EventStructure>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!es_leq(chain[i], chain[i + 1]))
      throw std::invalid_argument("es_lub: element " + std::to_string(i) + " is not below its successor");
  EventStructure out;
  for (const auto& es : chain) {
    EventStructure next = es_union(out, es);
    out = std::move(next);
  }
  // Horizon markers are properties of one approximant, not of the union.
  if (!chain.empty()) {
    EventStructure trimmed;
    for (const auto& [id, ev] : out.events()) trimmed.add_event(ev);
    for (const auto& [x, y] : out.conflicts()) trimmed.add_conflict(x, y);
    for (const auto& g : out.enablings()) trimmed.add_enabling(g.premise, g.target);
    for (const auto& h : chain.back().horizons()) trimmed.add_horizon(h);
    return trimmed;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

ActionLabel label_from_string(const std::string& s) {
  if (s == "✓" || s == "tick") return ActionLabel::tick();
  if (s.size() >= 2 && s[0] == '!') return ActionLabel::output(s.substr(1));
  if (s.size() >= 2 && s[0] == '?') return ActionLabel::input(s.substr(1));
  throw std::invalid_argument("bad action label '" + s + "'");
}

nlohmann::ordered_json ids(const EventSet& s) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& e : s) j.push_back(e.str());
  return j;
}

}  // namespace

std::string to_json(const EventStructure& es) {
  nlohmann::ordered_json j;
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& [id, ev] : es.events())
    j["events"].push_back({{"id", id.str()}, {"participant", ev.participant}, {"label", ev.label.str()}});
  j["conflicts"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : es.conflicts()) j["conflicts"].push_back({a.str(), b.str()});
  j["enablings"] = nlohmann::ordered_json::array();
  for (const auto& g : es.enablings()) j["enablings"].push_back({{"premise", ids(g.premise)}, {"target", g.target.str()}});
  if (!es.horizons().empty()) {
    j["horizons"] = nlohmann::ordered_json::array();
    for (const auto& h : es.horizons()) j["horizons"].push_back(ids(h));
  }
  return j.dump(2);
}

EventStructure es_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  EventStructure es;
  for (const auto& e : j.at("events"))
    es.add_event({EventId::parse(e.at("id")), e.at("participant"), label_from_string(e.at("label"))});
  for (const auto& c : j.at("conflicts")) es.add_conflict(EventId::parse(c.at(0)), EventId::parse(c.at(1)));
  for (const auto& g : j.at("enablings")) {
    EventSet p;
    for (const auto& x : g.at("premise")) p.insert(EventId::parse(x));
    es.add_enabling(std::move(p), EventId::parse(g.at("target")));
  }
  if (j.contains("horizons")) {
    for (const auto& h : j.at("horizons")) {
      EventSet p;
      for (const auto& x : h) p.insert(EventId::parse(x));
      es.add_horizon(std::move(p));
    }
  }
  return es;
}

std::string ets_to_dot(const Ets& t, const EventStructure& root, const std::string& title) {
  Lts l = t.lts;
  for (std::size_t i = 0; i < l.edges.size(); ++i) {
    const auto& id = t.edge_events[i].front();
    l.edges[i].label = id.str() + " / " + root.event(id).label.str();
  }
  // Remainder dumps are too long for tooltips.
  for (std::size_t i = 0; i < l.states.size(); ++i) l.states[i] = "state " + std::to_string(i);
  return to_dot(l, title);
}

// ---------------------------------------------------------------------------

IndexedEs::IndexedEs(const EventStructure& es) {
  for (const auto& [id, ev] : es.events()) {
    index.emplace(id, events.size());
    events.push_back(ev);
  }
  const std::size_t n = events.size();
  conflicts.assign(n, Bits(n));
  for (const auto& [a, b] : es.conflicts()) {
    conflicts[index.at(a)].set(index.at(b));
    conflicts[index.at(b)].set(index.at(a));
  }
  generators.assign(n, {});
  // A premise with an internal conflict can never be contained in a history.
  for (const auto& g : es.enablings()) {
    Bits premise = to_bits(g.premise);
    if (!conflict_free(premise)) continue;
    std::vector<std::uint32_t> members;
    for (auto i = premise.find_first(); i != Bits::npos; i = premise.find_next(i))
      members.push_back(static_cast<std::uint32_t>(i));
    generators[index.at(g.target)].push_back(std::move(members));
  }
  for (const auto& h : es.horizons()) horizons.push_back(to_bits(h));
}

Bits IndexedEs::to_bits(const EventSet& s) const {
  Bits b(events.size());
  for (const auto& e : s) {
    auto it = index.find(e);
    if (it == index.end()) throw UnknownEvent(e);
    b.set(it->second);
  }
  return b;
}

EventSet IndexedEs::to_set(const Bits& b) const {
  EventSet s;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) s.insert(events[i].id);
  return s;
}

bool IndexedEs::conflict_free(const Bits& xs) const {
  for (auto i = xs.find_first(); i != Bits::npos; i = xs.find_next(i))
    if (conflicts[i].intersects(xs)) return false;
  return true;
}

bool IndexedEs::enabled(const Bits& history, std::size_t e) const {
  for (const auto& g : generators[e])
    if (std::all_of(g.begin(), g.end(), [&](std::uint32_t i) { return history.test(i); })) return true;
  return false;
}

bool IndexedEs::available(const Bits& history, std::size_t e) const {
  return !history.test(e) && !conflicts[e].intersects(history) && enabled(history, e);
}

Bits IndexedEs::available_set(const Bits& history) const {
  Bits out(events.size());
  for (std::size_t e = 0; e < events.size(); ++e)
    if (available(history, e)) out.set(e);
  return out;
}

bool IndexedEs::horizon_reached(const Bits& history) const {
  for (const auto& h : horizons)
    if (h.is_subset_of(history) && conflict_free(h)) return true;
  return false;
}

}  // namespace sesgame
