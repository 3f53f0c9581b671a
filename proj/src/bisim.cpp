#include "sesgame/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sesgame {

namespace {

bool action_label(const std::string& l) {
  if (l == "✓") return true;
  return l.size() >= 2 && (l[0] == '!' || l[0] == '?');
}

void check_alphabet(const Lts& l, const char* side) {
  for (const auto& e : l.edges)
    if (!action_label(e.label))
      throw AlphabetMismatch(std::string(side) + " system has non-action label '" + e.label + "'");
}

}  // namespace

BisimResult bisim(const Lts& a, const Lts& b, std::optional<std::size_t> bound) {
  check_alphabet(a, "left");
  check_alphabet(b, "right");
  const std::size_t na = a.size();
  const std::size_t n = na + b.size();

  // Disjoint union, labels interned.
  std::map<std::string, int> labels;
  std::vector<std::vector<std::pair<int, std::size_t>>> succ(n);
  auto add = [&](const Lts& l, std::size_t offset) {
    for (const auto& e : l.edges) {
      auto [it, fresh] = labels.emplace(e.label, static_cast<int>(labels.size()));
      succ[e.from + offset].push_back({it->second, e.to + offset});
    }
  };
  add(a, 0);
  add(b, na);

  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = n ? 1 : 0;
  BisimResult r;
  r.bound = bound;
  while (!bound || r.rounds < *bound) {
    using Signature = std::pair<std::size_t, std::set<std::pair<int, std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      Signature sig{block[s], {}};
      for (const auto& [l, t] : succ[s]) sig.second.insert({l, block[t]});
      next[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    ++r.rounds;
    bool stable = ids.size() == blocks;
    block = std::move(next);
    blocks = ids.size();
    if (stable) {
      r.bound.reset();  // fixpoint: the bounded answer is the exact one
      break;
    }
  }
  r.bisimilar = block[a.initial] == block[na + b.initial];
  return r;
}

}  // namespace sesgame
