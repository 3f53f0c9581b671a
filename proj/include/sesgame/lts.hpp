#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sesgame {

/// Finite labelled transition system over opaque state keys.
struct Lts {
  struct Edge {
    std::size_t from;
    std::string label;
    std::size_t to;
  };

  std::vector<std::string> states;
  std::size_t initial = 0;
  std::vector<Edge> edges;
  bool truncated = false;

  std::size_t size() const { return states.size(); }
  std::vector<std::vector<const Edge*>> successors() const;
};

/// Graphviz rendering; `title` becomes the graph name.
std::string to_dot(const Lts& lts, const std::string& title);

}  // namespace sesgame
