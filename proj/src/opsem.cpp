#include "sesgame/opsem.hpp"

#include <deque>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

namespace sesgame {

std::string Configuration::key() const { return pretty(left) + " || " + pretty(right); }

std::string SyncStep::str() const {
  const char* who = side == Side::Left ? "L" : "R";
  switch (kind) {
    case Kind::Commit:
      return std::string(who) + ":commit !" + action;
    case Kind::Unfold:
      return std::string(who) + ":unfold";
    case Kind::Sync:
      break;
  }
  return "sync " + action;
}

namespace {

const Choice* committed_output(const SessionType& t) {
  auto c = t.as<Choice>();
  return c && c->internal() && c->branches.size() == 1 ? c : nullptr;
}

const Branch* offers(const SessionType& t, const std::string& action) {
  auto c = t.as<Choice>();
  if (!c || c->internal()) return nullptr;
  for (const auto& b : c->branches)
    if (b.action == action) return &b;
  return nullptr;
}

Configuration place(Side s, const Configuration& c, SessionType t) {
  return s == Side::Left ? Configuration{std::move(t), c.right} : Configuration{c.left, std::move(t)};
}

}  // namespace

std::vector<std::pair<SyncStep, Configuration>> step_fig1(const Configuration& c) {
  std::vector<std::pair<SyncStep, Configuration>> out;
  for (Side s : {Side::Left, Side::Right}) {
    const SessionType& t = s == Side::Left ? c.left : c.right;
    if (t.is<Rec>()) {
      out.push_back({{SyncStep::Kind::Unfold, s, ""}, place(s, c, unfold(t))});
    } else if (auto ch = t.as<Choice>(); ch && ch->internal() && ch->branches.size() > 1) {
      for (const auto& b : ch->branches)
        out.push_back({{SyncStep::Kind::Commit, s, b.action}, place(s, c, st::send(b.action, b.cont))});
    }
  }
  if (auto out_l = committed_output(c.left)) {
    const auto& b = out_l->branches.front();
    if (auto in = offers(c.right, b.action))
      out.push_back({{SyncStep::Kind::Sync, Side::Left, b.action}, {b.cont, in->cont}});
  }
  if (auto out_r = committed_output(c.right)) {
    const auto& b = out_r->branches.front();
    if (auto in = offers(c.left, b.action))
      out.push_back({{SyncStep::Kind::Sync, Side::Right, b.action}, {in->cont, b.cont}});
  }
  return out;
}

std::vector<std::pair<ActionLabel, Configuration>> step_turn(const Configuration& c) {
  std::vector<std::pair<ActionLabel, Configuration>> out;
  for (Side s : {Side::Left, Side::Right}) {
    SessionType self = unfold_head(s == Side::Left ? c.left : c.right);
    const SessionType& other = s == Side::Left ? c.right : c.left;
    if (self.is<Success>()) {
      out.push_back({ActionLabel::tick(), place(s, c, st::term0())});
    } else if (auto ch = self.as<Choice>()) {
      if (ch->internal()) {
        for (const auto& b : ch->branches)
          out.push_back({ActionLabel::output(b.action), place(s, c, st::buffer(b.action, b.cont))});
      } else if (auto buf = other.as<Buffer>()) {
        if (auto in = offers(self, buf->action)) {
          Configuration next = s == Side::Left ? Configuration{in->cont, buf->cont} : Configuration{buf->cont, in->cont};
          out.push_back({ActionLabel::input(buf->action), std::move(next)});
        }
      }
    }
  }
  return out;
}

namespace {

struct Explored {
  std::vector<Configuration> configs;
  Lts lts;
  std::vector<std::ptrdiff_t> parent_edge;  // index into lts.edges, -1 for the root
};

Explored explore_impl(const Configuration& init, Semantics sem, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("state limit must be positive");
  Explored ex;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](const Configuration& c, std::ptrdiff_t parent) -> std::optional<std::size_t> {
    std::string k = c.key();
    if (auto it = index.find(k); it != index.end()) return it->second;
    if (ex.configs.size() >= limit) {
      ex.lts.truncated = true;
      return std::nullopt;
    }
    index.emplace(k, ex.configs.size());
    ex.configs.push_back(c);
    ex.lts.states.push_back(std::move(k));
    ex.parent_edge.push_back(parent);
    return ex.configs.size() - 1;
  };
  add(init, -1);
  for (std::size_t i = 0; i < ex.configs.size(); ++i) {
    std::vector<std::pair<std::string, Configuration>> succ;
    if (sem == Semantics::Synchronous) {
      for (auto& [st, c] : step_fig1(ex.configs[i])) succ.emplace_back(st.str(), std::move(c));
    } else {
      for (auto& [l, c] : step_turn(ex.configs[i])) succ.emplace_back(l.str(), std::move(c));
    }
    for (auto& [label, c] : succ) {
      auto edge_id = static_cast<std::ptrdiff_t>(ex.lts.edges.size());
      auto to = add(c, edge_id);
      if (!to) continue;
      ex.lts.edges.push_back({i, label, *to});
    }
  }
  return ex;
}

std::vector<std::string> path_to(const Explored& ex, std::size_t s) {
  std::vector<std::string> rev;
  for (std::ptrdiff_t e = ex.parent_edge[s]; e >= 0; e = ex.parent_edge[ex.lts.edges[e].from])
    rev.push_back(ex.lts.edges[e].label);
  return {rev.rbegin(), rev.rend()};
}

bool at_horizon(const SessionType& t) { return t.is<Horizon>(); }

ComplianceVerdict decide(const SessionType& p, const SessionType& q, const ComplianceOptions& opts, Semantics sem) {
  require_valid(p);
  require_valid(q);
  ComplianceVerdict v;
  SessionType l = p, r = q;
  if (opts.unroll_depth && (has_recursion(p) || has_recursion(q))) {
    v.bounded_depth = *opts.unroll_depth;
    l = approximate(p, *opts.unroll_depth);
    r = approximate(q, *opts.unroll_depth);
  }
  auto ex = explore_impl({l, r}, sem, opts.state_limit);
  v.truncated = ex.lts.truncated;
  v.states = ex.configs.size();

  std::vector<bool> has_succ(ex.configs.size(), false);
  for (const auto& e : ex.lts.edges) has_succ[e.from] = true;
  // A truncated frontier state may still have successors; only fully expanded states count.
  std::vector<bool> expanded(ex.configs.size(), true);
  if (v.truncated) {
    for (std::size_t i = 0; i < ex.configs.size(); ++i) {
      auto n = sem == Semantics::Synchronous ? step_fig1(ex.configs[i]).size() : step_turn(ex.configs[i]).size();
      if (n > 0 && !has_succ[i]) expanded[i] = false;
    }
  }

  // BFS order makes the first hit a shortest witness.
  for (std::size_t i = 0; i < ex.configs.size(); ++i) {
    if (has_succ[i] || !expanded[i]) continue;
    const auto& c = ex.configs[i];
    bool done = sem == Semantics::Synchronous ? c.left.is<Success>() : c.left.is<Term0>();
    if (done) continue;
    if (at_horizon(c.left) || at_horizon(c.right)) {
      ++v.horizon_states;
      continue;
    }
    v.result = ComplianceVerdict::Result::NonCompliant;
    v.witness = path_to(ex, i);
    v.stuck_state = c.key();
    return v;
  }
  v.result = v.truncated ? ComplianceVerdict::Result::Indeterminate : ComplianceVerdict::Result::Compliant;
  return v;
}

}  // namespace

Lts explore(const Configuration& c, Semantics sem, std::size_t state_limit) {
  return explore_impl(c, sem, state_limit).lts;
}

ComplianceVerdict check_compliance(const SessionType& p, const SessionType& q, const ComplianceOptions& opts) {
  return decide(p, q, opts, Semantics::Synchronous);
}

ComplianceVerdict check_compliance_turn(const SessionType& p, const SessionType& q, const ComplianceOptions& opts) {
  return decide(p, q, opts, Semantics::TurnBased);
}

std::string to_string(ComplianceVerdict::Result r) {
  switch (r) {
    case ComplianceVerdict::Result::Compliant:
      return "compliant";
    case ComplianceVerdict::Result::NonCompliant:
      return "non-compliant";
    case ComplianceVerdict::Result::Indeterminate:
      break;
  }
  return "indeterminate";
}

std::string to_json(const ComplianceVerdict& v) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(v.result);
  j["witness"] = v.witness;
  j["truncated"] = v.truncated;
  j["bounded_depth"] = v.bounded_depth ? nlohmann::ordered_json(*v.bounded_depth) : nlohmann::ordered_json(nullptr);
  j["states"] = v.states;
  if (!v.stuck_state.empty()) j["stuck_state"] = v.stuck_state;
  j["note"] = "only stuck states are constrained; cycles without a stuck state count as compliant";
  return j.dump();
}

// ---------------------------------------------------------------------------

std::vector<std::vector<const Lts::Edge*>> Lts::successors() const {
  std::vector<std::vector<const Edge*>> out(states.size());
  for (const auto& e : edges) out[e.from].push_back(&e);
  return out;
}

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace

std::string to_dot(const Lts& lts, const std::string& title) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(title) << "\" {\n  rankdir=LR;\n  node [shape=circle, label=\"\", width=0.15];\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    out << "  s" << i << " [tooltip=\"" << dot_escape(lts.states[i]) << "\"";
    if (i == lts.initial) out << ", style=filled, fillcolor=black";
    out << "];\n";
  }
  for (const auto& e : lts.edges)
    out << "  s" << e.from << " -> s" << e.to << " [label=\"" << dot_escape(e.label) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace sesgame
