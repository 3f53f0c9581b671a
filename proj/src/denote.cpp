#include "sesgame/denote.hpp"

#include <functional>
#include <optional>

namespace sesgame {

namespace {

/// Pre-order numbering of a term, mirrored as a tree.
struct Numbered {
  int position = 0;                // success position
  std::vector<int> branch_positions;
  std::vector<Numbered> children;  // branch continuations, or the rec body
  int occurrence = 0;              // variable occurrence index
};

struct Counters {
  int position = 0;
  int occurrence = 0;
};

Numbered number(const SessionType& t, Counters& c) {
  Numbered n;
  if (t.is<Success>()) {
    n.position = ++c.position;
  } else if (auto ch = t.as<Choice>()) {
    for (const auto& b : ch->branches) {
      n.branch_positions.push_back(++c.position);
      n.children.push_back(number(b.cont, c));
    }
  } else if (auto r = t.as<Rec>()) {
    n.children.push_back(number(r->body, c));
  } else if (t.is<Var>()) {
    n.occurrence = ++c.occurrence;
  } else {
    throw std::invalid_argument("denote: runtime-only term " + pretty(t));
  }
  return n;
}

EventStructure shift(const EventStructure& es, int occurrence) {
  auto moved = [&](EventId id) {
    id.path.insert(id.path.begin(), occurrence);
    return id;
  };
  auto moved_set = [&](const EventSet& s) {
    EventSet out;
    for (const auto& e : s) out.insert(moved(e));
    return out;
  };
  EventStructure out;
  for (const auto& [id, ev] : es.events()) out.add_event({moved(id), ev.participant, ev.label});
  for (const auto& [a, b] : es.conflicts()) out.add_conflict(moved(a), moved(b));
  for (const auto& g : es.enablings()) out.add_enabling(moved_set(g.premise), moved(g.target));
  for (const auto& h : es.horizons()) out.add_horizon(moved_set(h));
  return out;
}

/// The empty structure, marked as a cut point.
EventStructure bottom() {
  EventStructure es;
  es.add_horizon({});
  return es;
}

class Denoter {
 public:
  Denoter(const Participant& who, int depth) : who_(who), depth_(depth) {}

  EventStructure run(const SessionType& t, const Numbered& n, const DenoteEnv& env) const {
    if (t.is<Success>()) {
      EventStructure es;
      EventId e = id(n.position);
      es.add_event({e, who_.name, ActionLabel::tick()});
      es.add_enabling({}, e);
      return es;
    }
    if (auto v = t.as<Var>()) {
      auto it = env.find(v->name);
      if (it == env.end()) throw std::invalid_argument("denote: free variable " + v->name);
      return shift(it->second, n.occurrence);
    }
    if (auto r = t.as<Rec>()) return fix(r->var, r->body, n.children.front(), env);
    const auto& ch = *t.as<Choice>();
    EventStructure out;
    std::vector<std::vector<EventId>> initial(ch.branches.size());
    for (std::size_t i = 0; i < ch.branches.size(); ++i) {
      const auto& b = ch.branches[i];
      ActionLabel a = ch.internal() ? ActionLabel::output(b.action) : ActionLabel::input(b.action);
      EventStructure branch = prefix(a, id(n.branch_positions[i]), run(b.cont, n.children[i], env));
      for (const auto& g : branch.enablings())
        if (g.premise.empty()) initial[i].push_back(g.target);
      out = es_union(out, branch);
    }
    for (std::size_t i = 0; i < initial.size(); ++i)
      for (std::size_t j = i + 1; j < initial.size(); ++j)
        for (const auto& x : initial[i])
          for (const auto& y : initial[j]) out.add_conflict(x, y);
    return out;
  }

  EventStructure fix(const std::string& var, const SessionType& body, const Numbered& n,
                     const DenoteEnv& env) const {
    EventStructure approx = bottom();
    for (int k = 0; k < depth_; ++k) {
      DenoteEnv inner = env;
      inner.insert_or_assign(var, approx);
      approx = run(body, n, inner);
    }
    return approx;
  }

 private:
  Participant who_;
  int depth_;

  EventId id(int position) const {
    return {who_.parity == Participant::Parity::Odd ? 2 * position - 1 : 2 * position, {}};
  }

  // alpha.P: the new event starts with an empty premise and becomes the
  // premise of every event P could start with.
  EventStructure prefix(const ActionLabel& a, const EventId& e, const EventStructure& cont) const {
    EventStructure out;
    out.add_event({e, who_.name, a});
    for (const auto& [id, ev] : cont.events()) out.add_event(ev);
    for (const auto& [x, y] : cont.conflicts()) out.add_conflict(x, y);
    out.add_enabling({}, e);
    for (const auto& g : cont.enablings()) out.add_enabling(g.premise.empty() ? EventSet{e} : g.premise, g.target);
    for (const auto& h : cont.horizons()) out.add_horizon(h.empty() ? EventSet{e} : h);
    return out;
  }
};

// Number of communications on the causal chain ending in each event, or
// nothing for label matching.
using Positions = std::optional<std::map<EventId, int>>;

Positions positions(const EventStructure& es, PartnerMatching matching) {
  if (matching == PartnerMatching::ByLabel) return std::nullopt;
  std::map<EventId, std::optional<EventId>> parent;
  for (const auto& g : es.enablings()) {
    if (g.premise.size() > 1 || parent.count(g.target))
      throw std::invalid_argument("positional matching needs a sequential structure; " + g.target.str() +
                                  " has a joint or repeated enabling");
    parent[g.target] = g.premise.empty() ? std::nullopt : std::optional{*g.premise.begin()};
  }
  std::map<EventId, int> out;
  std::function<int(const EventId&, std::size_t)> pos = [&](const EventId& e, std::size_t guard) -> int {
    if (auto it = out.find(e); it != out.end()) return it->second;
    if (guard > es.size()) throw std::invalid_argument("positional matching: cyclic enabling at " + e.str());
    int own = es.event(e).label.is_tick() ? 0 : 1;
    auto it = parent.find(e);
    int before = it == parent.end() || !it->second ? 0 : pos(*it->second, guard + 1);
    return out[e] = before + own;
  };
  for (const auto& [id, ev] : es.events()) pos(id, 0);
  return out;
}

struct Side {
  const EventStructure& es;
  Positions pos;
  int at(const EventId& e) const { return pos ? pos->at(e) : 0; }
};

// All assignments of a co-labelled partner (from `other`) to each premise event.
void matchers(const std::vector<EventId>& premise, std::size_t i, const Side& self, const Side& other, EventSet& acc,
              const std::function<void(const EventSet&)>& emit) {
  if (i == premise.size()) {
    emit(acc);
    return;
  }
  const ActionLabel& l = self.es.event(premise[i]).label;
  if (l.is_tick()) return;  // nothing answers a success action
  ActionLabel want = l.co();
  for (const auto& [id, ev] : other.es.events()) {
    if (ev.label != want || other.at(id) != self.at(premise[i])) continue;
    bool fresh = acc.insert(id).second;
    matchers(premise, i + 1, self, other, acc, emit);
    if (fresh) acc.erase(id);
  }
}

void compose_side(const Side& self, const Side& other, EventStructure& out) {
  for (const auto& g : self.es.enablings()) {
    const ActionLabel& l = self.es.event(g.target).label;
    std::vector<EventId> premise(g.premise.begin(), g.premise.end());
    EventSet acc;
    matchers(premise, 0, self, other, acc, [&](const EventSet& partners) {
      EventSet base = g.premise;
      base.insert(partners.begin(), partners.end());
      if (l.is_coaction()) {
        out.add_enabling(base, g.target);
        return;
      }
      for (const auto& [id, ev] : other.es.events()) {
        if (ev.label != l.co() || other.at(id) != self.at(g.target)) continue;
        EventSet p = base;
        p.insert(id);
        out.add_enabling(std::move(p), g.target);
      }
    });
  }
  for (const auto& h : self.es.horizons()) {
    std::vector<EventId> premise(h.begin(), h.end());
    EventSet acc;
    matchers(premise, 0, self, other, acc, [&](const EventSet& partners) {
      EventSet p = h;
      p.insert(partners.begin(), partners.end());
      out.add_horizon(std::move(p));
    });
  }
}

}  // namespace

EventStructure denote(const SessionType& t, const Participant& who, const DenoteEnv& env, int unroll_depth) {
  if (unroll_depth < 0) throw std::invalid_argument("unroll depth must be non-negative");
  Counters c;
  Numbered n = number(t, c);
  return Denoter(who, unroll_depth).run(t, n, env);
}

EventStructure fix_approx(const std::string& var, const SessionType& body, const Participant& who,
                          const DenoteEnv& env, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  Counters c;
  Numbered n = number(body, c);
  return Denoter(who, depth).fix(var, body, n, env);
}

EventStructure denote_par(const EventStructure& left, const EventStructure& right, PartnerMatching matching) {
  for (const auto& [id, ev] : left.events())
    if (right.contains(id)) throw std::invalid_argument("denote_par: event " + id.str() + " on both sides");
  EventStructure out;
  for (const auto& [id, ev] : left.events()) out.add_event(ev);
  for (const auto& [id, ev] : right.events()) out.add_event(ev);
  for (const auto& [a, b] : left.conflicts()) out.add_conflict(a, b);
  for (const auto& [a, b] : right.conflicts()) out.add_conflict(a, b);
  Side l{left, positions(left, matching)};
  Side r{right, positions(right, matching)};
  compose_side(l, r, out);
  compose_side(r, l, out);
  return out;
}

EventStructure denote_pair(const SessionType& p, const std::string& a, const SessionType& q, const std::string& b,
                           int unroll_depth, PartnerMatching matching) {
  return denote_par(denote(p, {a, Participant::Parity::Odd}, {}, unroll_depth),
                    denote(q, {b, Participant::Parity::Even}, {}, unroll_depth), matching);
}

std::string to_string(PartnerMatching m) { return m == PartnerMatching::ByLabel ? "label" : "position"; }

PartnerMatching matching_from_string(const std::string& s) {
  if (s == "label") return PartnerMatching::ByLabel;
  if (s == "position") return PartnerMatching::ByPosition;
  throw std::invalid_argument("unknown partner matching '" + s + "'");
}

}  // namespace sesgame
