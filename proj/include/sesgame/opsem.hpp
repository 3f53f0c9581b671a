#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sesgame/lts.hpp"
#include "sesgame/syntax.hpp"

namespace sesgame {

/// The composition left || right.
struct Configuration {
  SessionType left;
  SessionType right;

  /// Canonical state key: printed form, recursion kept folded.
  std::string key() const;
  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.left == b.left && a.right == b.right;
  }
};

enum class Side { Left, Right };

/// A step of the synchronous semantics. All such steps are unobservable; the
/// kind and action are kept for readable witnesses.
struct SyncStep {
  enum class Kind { Commit, Unfold, Sync };
  Kind kind;
  Side side = Side::Left;  // unused for Sync
  std::string action;      // committed / synchronised action
  std::string str() const;
};

std::vector<std::pair<SyncStep, Configuration>> step_fig1(const Configuration& c);

/// Turn-based step: internal choices write a one-place buffer, external
/// choices consume a matching buffer of the partner, success fires ✓ and
/// becomes 0. Recursion is unfolded silently.
std::vector<std::pair<ActionLabel, Configuration>> step_turn(const Configuration& c);

enum class Semantics { Synchronous, TurnBased };

inline constexpr std::size_t kDefaultStateLimit = 100000;

/// Breadth-first reachability closure with dedup on canonical keys.
Lts explore(const Configuration& c, Semantics sem, std::size_t state_limit = kDefaultStateLimit);

struct ComplianceVerdict {
  enum class Result { Compliant, NonCompliant, Indeterminate };
  Result result = Result::Compliant;
  /// Shortest step sequence to a stuck configuration whose client side has not succeeded.
  std::vector<std::string> witness;
  std::string stuck_state;
  bool truncated = false;
  std::size_t states = 0;
  /// Set when recursion was unrolled to a finite depth before exploring.
  std::optional<int> bounded_depth;
  /// Stuck states whose outcome depends on behaviour past the unrolling horizon.
  std::size_t horizon_states = 0;

  bool compliant() const { return result == Result::Compliant; }
};

struct ComplianceOptions {
  std::size_t state_limit = kDefaultStateLimit;
  /// When set and a side is recursive, both sides are unrolled to this depth
  /// and stuck states at the cut are reported as inconclusive instead of failing.
  std::optional<int> unroll_depth;
};

/// p || q is compliant iff every reachable stuck configuration has p' = 1.
/// Cycles without a stuck state count as compliant.
ComplianceVerdict check_compliance(const SessionType& p, const SessionType& q, const ComplianceOptions& opts = {});

/// Turn-based formulation: every stuck configuration has p' = 0.
ComplianceVerdict check_compliance_turn(const SessionType& p, const SessionType& q,
                                        const ComplianceOptions& opts = {});

std::string to_string(ComplianceVerdict::Result r);
std::string to_json(const ComplianceVerdict& v);

}  // namespace sesgame
