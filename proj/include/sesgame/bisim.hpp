#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "sesgame/lts.hpp"

namespace sesgame {

class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BisimResult {
  bool bisimilar = false;
  /// Set when only `rounds`-step bisimilarity was decided.
  std::optional<std::size_t> bound;
  /// Refinement rounds performed.
  std::size_t rounds = 0;
};

/// Strong bisimilarity of the initial states by partition refinement over the
/// disjoint union. With `bound`, refinement stops after that many rounds,
/// which decides `bound`-step bisimilarity.
///
/// Every edge label must be an action label ("!a", "?a" or "✓"); anything
/// else (for instance an event id left on an ETS edge) throws AlphabetMismatch.
BisimResult bisim(const Lts& a, const Lts& b, std::optional<std::size_t> bound = std::nullopt);

}  // namespace sesgame
