#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>

namespace oracle {

using namespace sesgame;

namespace {

std::vector<EventId> ids(const EventStructure& es) {
  std::vector<EventId> out;
  for (const auto& [id, ev] : es.events()) out.push_back(id);
  return out;
}

bool cf(const EventStructure& es, const EventSet& s) {
  for (const auto& x : s)
    for (const auto& y : s)
      if (x < y && es.in_conflict(x, y)) return false;
  return true;
}

bool includes(const EventSet& big, const EventSet& small) {
  return std::all_of(small.begin(), small.end(), [&](const EventId& x) { return big.count(x) != 0; });
}

EventSet subset(const std::vector<EventId>& universe, std::uint32_t mask) {
  EventSet s;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1u << i)) s.insert(universe[i]);
  return s;
}

EventId eid(int i) { return EventId{i, {}}; }

EventStructure skeleton(int n, std::uint32_t conflict_mask) {
  EventStructure es;
  for (int i = 1; i <= n; ++i) es.add_event({eid(i), "A", ActionLabel::output("a")});
  int bit = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j, ++bit)
      if (conflict_mask & (1u << bit)) es.add_conflict(eid(i), eid(j));
  return es;
}

std::vector<EventSet> premises_for(int n, int target) {
  std::vector<EventId> others;
  for (int i = 1; i <= n; ++i)
    if (i != target) others.push_back(eid(i));
  std::vector<EventSet> out;
  for (std::uint32_t m = 0; m < (1u << others.size()); ++m) out.push_back(subset(others, m));
  return out;
}

}  // namespace

Saturated saturate(const EventStructure& es) {
  auto universe = ids(es);
  if (universe.size() > 16) throw std::invalid_argument("saturate: too many events");
  Saturated out;
  for (std::uint32_t m = 0; m < (1u << universe.size()); ++m) {
    EventSet x = subset(universe, m);
    if (!cf(es, x)) continue;
    for (const auto& g : es.enablings())
      if (includes(x, g.premise)) out.insert({x, g.target});
  }
  return out;
}

Saturated remainder_of_saturated(const EventStructure& es, const Saturated& sat, const EventId& e) {
  Saturated out;
  for (const auto& [x, target] : sat) {
    if (target == e || es.in_conflict(target, e)) continue;
    EventSet with = x;
    with.insert(e);
    if (!cf(es, with)) continue;
    EventSet without = x;
    without.erase(e);
    out.insert({without, target});
  }
  return out;
}

void for_each_structure(int n, const std::function<void(const EventStructure&)>& visit) {
  if (n > 3) throw std::invalid_argument("for_each_structure: n too large");
  const int pairs = n * (n - 1) / 2;
  std::vector<std::vector<EventSet>> premises;
  for (int i = 1; i <= n; ++i) premises.push_back(premises_for(n, i));
  const std::size_t per_event = premises.empty() ? 0 : premises.front().size();
  // Each event picks a subset of its possible premises.
  std::uint64_t combos = 1;
  for (int i = 0; i < n; ++i) combos <<= per_event;
  for (std::uint32_t c = 0; c < (1u << pairs); ++c) {
    for (std::uint64_t g = 0; g < combos; ++g) {
      EventStructure es = skeleton(n, c);
      std::uint64_t rest = g;
      for (int i = 0; i < n; ++i) {
        std::uint64_t choice = rest & ((std::uint64_t{1} << per_event) - 1);
        rest >>= per_event;
        for (std::size_t k = 0; k < per_event; ++k)
          if (choice & (std::uint64_t{1} << k)) es.add_enabling(premises[i][k], eid(i + 1));
      }
      visit(es);
    }
  }
}

void for_each_single_generator_structure(int n, const std::function<void(const EventStructure&)>& visit) {
  const int pairs = n * (n - 1) / 2;
  std::vector<std::vector<EventSet>> premises;
  for (int i = 1; i <= n; ++i) premises.push_back(premises_for(n, i));
  const std::uint64_t options = premises.front().size() + 1;  // last option: no generator
  std::uint64_t combos = 1;
  for (int i = 0; i < n; ++i) combos *= options;
  for (std::uint32_t c = 0; c < (1u << pairs); ++c) {
    for (std::uint64_t g = 0; g < combos; ++g) {
      EventStructure es = skeleton(n, c);
      std::uint64_t rest = g;
      for (int i = 0; i < n; ++i) {
        std::uint64_t choice = rest % options;
        rest /= options;
        if (choice + 1 < options) es.add_enabling(premises[i][choice], eid(i + 1));
      }
      visit(es);
    }
  }
}

EventStructure random_structure(std::mt19937_64& rng, int n, const std::vector<std::string>& owners,
                                bool with_ticks) {
  std::uniform_int_distribution<int> pct(0, 99);
  std::uniform_int_distribution<std::size_t> owner(0, owners.size() - 1);
  EventStructure es;
  for (int i = 1; i <= n; ++i) {
    ActionLabel l = pct(rng) < 50 ? ActionLabel::output("a") : ActionLabel::input("a");
    if (with_ticks && pct(rng) < 25) l = ActionLabel::tick();
    es.add_event({eid(i), owners[owner(rng)], l});
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (pct(rng) < 20) es.add_conflict(eid(i), eid(j));
  for (int i = 1; i <= n; ++i) {
    int gens = pct(rng) % 3;
    for (int k = 0; k < gens; ++k) {
      EventSet premise;
      for (int j = 1; j <= n; ++j)
        if (j != i && pct(rng) < 30) premise.insert(eid(j));
      es.add_enabling(premise, eid(i));
    }
  }
  return es;
}

std::vector<Play> all_plays(const EventStructure& es, std::size_t cap) {
  std::vector<Play> out;
  Play current;
  EventSet history;
  std::function<void()> walk = [&]() {
    if (out.size() >= cap) throw std::runtime_error("all_plays: too many plays");
    out.push_back(current);
    for (const auto& [id, ev] : es.events()) {
      if (history.count(id)) continue;
      bool clash = std::any_of(history.begin(), history.end(), [&](const EventId& h) { return es.in_conflict(h, id); });
      if (clash) continue;
      bool on = false;
      for (const auto& g : es.enablings())
        if (g.target == id && includes(history, g.premise)) on = true;
      if (!on) continue;
      current.push_back(id);
      history.insert(id);
      walk();
      history.erase(id);
      current.pop_back();
    }
  };
  walk();
  return out;
}

namespace {

bool can_fire(const EventStructure& es, const EventSet& history, const EventId& e) {
  if (history.count(e)) return false;
  for (const auto& h : history)
    if (es.in_conflict(h, e)) return false;
  for (const auto& g : es.enablings())
    if (g.target == e && includes(history, g.premise)) return true;
  return false;
}

std::vector<EventId> fireable(const EventStructure& es, const EventSet& history) {
  std::vector<EventId> out;
  for (const auto& [id, ev] : es.events())
    if (can_fire(es, history, id)) out.push_back(id);
  return out;
}

bool search(const EventStructure& es, Play& sigma, EventSet& history, const std::string& who,
            const std::vector<std::string>& everyone, bool eager) {
  std::vector<EventId> mine, theirs;
  for (const auto& e : fireable(es, history)) (es.event(e).participant == who ? mine : theirs).push_back(e);
  auto extends_all = [&](const std::vector<EventId>& next) {
    for (const auto& e : next) {
      sigma.push_back(e);
      history.insert(e);
      bool ok = search(es, sigma, history, who, everyone, eager);
      history.erase(e);
      sigma.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  const std::uint32_t full = (1u << mine.size()) - 1;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (eager && mask != full) continue;
    std::vector<EventId> next = theirs;
    for (std::size_t k = 0; k < mine.size(); ++k)
      if (mask & (1u << k)) next.push_back(mine[k]);
    // With nothing prescribed the opponents may stop here.
    if (mask == 0 && !winning_literal(es, sigma, who, everyone)) continue;
    if (extends_all(next)) return true;
  }
  return false;
}

}  // namespace

bool innocent_literal(const EventStructure& es, const Play& sigma, const std::string& who) {
  EventSet prefix;
  for (std::size_t i = 0; i <= sigma.size(); ++i) {
    for (const auto& [id, ev] : es.events()) {
      if (ev.participant != who || !can_fire(es, prefix, id)) continue;
      bool answered = false;
      for (std::size_t j = i; j < sigma.size(); ++j)
        if (sigma[j] == id || es.in_conflict(sigma[j], id)) answered = true;
      if (!answered) return false;
    }
    if (i < sigma.size()) prefix.insert(sigma[i]);
  }
  return true;
}

bool winning_literal(const EventStructure& es, const Play& sigma, const std::string& who,
                     const std::vector<std::string>& everyone) {
  if (!innocent_literal(es, sigma, who)) return false;
  for (const auto& p : everyone)
    if (p != who && !innocent_literal(es, sigma, p)) return true;
  for (const auto& e : sigma)
    if (es.event(e).participant == who && es.event(e).label.is_tick()) return true;
  return false;
}

bool wins_by_sequences(const EventStructure& es, const std::string& who, const std::vector<std::string>& everyone) {
  Play sigma;
  EventSet history;
  return search(es, sigma, history, who, everyone, false);
}

bool eager_wins_by_sequences(const EventStructure& es, const std::string& who,
                             const std::vector<std::string>& everyone) {
  Play sigma;
  EventSet history;
  return search(es, sigma, history, who, everyone, true);
}

// ---------------------------------------------------------------------------

namespace {

struct Db;
using DbPtr = std::shared_ptr<const Db>;

struct Db {
  enum class Kind { One, Choice, Rec, Bound, Free, Other } kind = Kind::One;
  bool internal = false;
  std::vector<std::pair<std::string, DbPtr>> branches;
  DbPtr body;
  int index = 0;
  std::string name;
};

DbPtr make(Db d) { return std::make_shared<const Db>(std::move(d)); }

DbPtr to_db(const SessionType& t, std::vector<std::string>& binders) {
  Db d;
  if (t.is<Success>()) {
    d.kind = Db::Kind::One;
  } else if (auto c = t.as<Choice>()) {
    d.kind = Db::Kind::Choice;
    d.internal = c->internal();
    for (const auto& b : c->branches) d.branches.push_back({b.action, to_db(b.cont, binders)});
  } else if (auto r = t.as<Rec>()) {
    d.kind = Db::Kind::Rec;
    binders.push_back(r->var);
    d.body = to_db(r->body, binders);
    binders.pop_back();
  } else if (auto v = t.as<Var>()) {
    auto it = std::find(binders.rbegin(), binders.rend(), v->name);
    if (it == binders.rend()) {
      d.kind = Db::Kind::Free;
      d.name = v->name;
    } else {
      d.kind = Db::Kind::Bound;
      d.index = static_cast<int>(it - binders.rbegin());
    }
  } else {
    d.kind = Db::Kind::Other;
    d.name = pretty(t);
  }
  return make(std::move(d));
}

DbPtr shift(const DbPtr& t, int by, int cutoff) {
  switch (t->kind) {
    case Db::Kind::Bound: {
      Db d = *t;
      if (d.index >= cutoff) d.index += by;
      return make(std::move(d));
    }
    case Db::Kind::Choice: {
      Db d = *t;
      for (auto& [a, c] : d.branches) c = shift(c, by, cutoff);
      return make(std::move(d));
    }
    case Db::Kind::Rec: {
      Db d = *t;
      d.body = shift(d.body, by, cutoff + 1);
      return make(std::move(d));
    }
    default:
      return t;
  }
}

DbPtr subst(const DbPtr& t, int j, const DbPtr& s) {
  switch (t->kind) {
    case Db::Kind::Bound:
      return t->index == j ? s : t;
    case Db::Kind::Choice: {
      Db d = *t;
      for (auto& [a, c] : d.branches) c = subst(c, j, s);
      return make(std::move(d));
    }
    case Db::Kind::Rec: {
      Db d = *t;
      d.body = subst(d.body, j + 1, shift(s, 1, 0));
      return make(std::move(d));
    }
    default:
      return t;
  }
}

std::string render(const DbPtr& t) {
  switch (t->kind) {
    case Db::Kind::One:
      return "1";
    case Db::Kind::Choice: {
      std::string s = t->internal ? "I{" : "E{";
      for (const auto& [a, c] : t->branches) s += a + ":" + render(c) + ";";
      return s + "}";
    }
    case Db::Kind::Rec:
      return "mu(" + render(t->body) + ")";
    case Db::Kind::Bound:
      return "#" + std::to_string(t->index);
    case Db::Kind::Free:
      return "free:" + t->name;
    case Db::Kind::Other:
      return "other:" + t->name;
  }
  return "?";
}

}  // namespace

std::string nameless(const SessionType& t) {
  std::vector<std::string> binders;
  return render(to_db(t, binders));
}

std::string nameless_unfold(const SessionType& rec_term) {
  std::vector<std::string> binders;
  DbPtr r = to_db(rec_term, binders);
  if (r->kind != Db::Kind::Rec) throw std::invalid_argument("nameless_unfold: not a recursion");
  return render(shift(subst(r->body, 0, shift(r, 1, 0)), -1, 0));
}

}  // namespace oracle
