#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sesgame {

enum class Polarity { Input, Output, Tick };

/// An action a (input), its co-action !a (output), or the success action.
/// The polarity is part of the identity: ?a and !a are different labels.
struct ActionLabel {
  std::string name;
  Polarity polarity = Polarity::Input;

  static ActionLabel input(std::string n) { return {std::move(n), Polarity::Input}; }
  static ActionLabel output(std::string n) { return {std::move(n), Polarity::Output}; }
  static ActionLabel tick() { return {"", Polarity::Tick}; }

  bool is_input() const { return polarity == Polarity::Input; }
  /// Outputs and the success action both count as co-actions.
  bool is_coaction() const { return polarity != Polarity::Input; }
  bool is_tick() const { return polarity == Polarity::Tick; }

  /// Throws std::logic_error on the success action, which has no co-label.
  ActionLabel co() const;

  /// "?a", "!a" or "✓".
  std::string str() const;

  auto operator<=>(const ActionLabel&) const = default;
};

struct TypeNode;

/// Immutable session type term. Copies share structure.
class SessionType {
 public:
  SessionType();  // Success
  explicit SessionType(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}

  const TypeNode& node() const { return *node_; }

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

  friend bool operator==(const SessionType& a, const SessionType& b);

 private:
  std::shared_ptr<const TypeNode> node_;
};

struct Branch {
  std::string action;
  SessionType cont;
};

struct Success {};
/// Internal choice when polarity is Output, external when Input.
struct Choice {
  Polarity polarity;
  std::vector<Branch> branches;
  bool internal() const { return polarity == Polarity::Output; }
};
struct Rec {
  std::string var;
  SessionType body;
};
struct Var {
  std::string name;
};
/// [!a]P: a one-place buffer holding an emitted output (turn-based execution only).
struct Buffer {
  std::string action;
  SessionType cont;
};
/// The stuck state reached after firing the success action.
struct Term0 {};
/// Cut point of a finite recursion unrolling; never written by users.
struct Horizon {};

struct TypeNode : std::variant<Success, Choice, Rec, Var, Buffer, Term0, Horizon> {
  using variant::variant;
};

template <class T>
const T* SessionType::as() const {
  return std::get_if<T>(static_cast<const TypeNode::variant*>(node_.get()));
}

namespace st {
SessionType success();
SessionType term0();
SessionType horizon();
SessionType var(std::string name);
SessionType rec(std::string var, SessionType body);
SessionType buffer(std::string action, SessionType cont);
SessionType internal(std::vector<Branch> branches);
SessionType external(std::vector<Branch> branches);
SessionType send(std::string action, SessionType cont = success());
SessionType recv(std::string action, SessionType cont = success());
}  // namespace st

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DuplicateAction, MixedChoice, Polarity };
  ParseError(Kind kind, std::size_t pos, const std::string& msg);
  Kind kind() const { return kind_; }
  std::size_t position() const { return pos_; }

 private:
  Kind kind_;
  std::size_t pos_;
};

/// Grammar:
///   P      ::= "1" | prefix | P op P | "rec" IDENT "." P | IDENT | "(" P ")"
///   prefix ::= ("!" | "?") IDENT ["." P]
///   op     ::= "(+)" | "+"
/// A prefix continuation binds tighter than a choice operator; `rec` extends as
/// far right as possible. Both operators may not be mixed at one level.
SessionType parse(std::string_view text);

struct Violation {
  std::string rule;     // free-variable, unguarded-recursion, duplicate-action, ...
  std::string subterm;  // pretty-printed offending subterm
};

/// Empty iff the term is closed, guarded, choice-distinct and free of runtime-only forms.
std::vector<Violation> validate(const SessionType& t);

/// Throws std::invalid_argument listing the violations, if any.
void require_valid(const SessionType& t);

/// rec x.P  ->  P{x := rec x.P}. Throws std::invalid_argument if t is not a Rec.
SessionType unfold(const SessionType& t);

/// Capture-avoiding substitution t{x := s}.
SessionType substitute(const SessionType& t, const std::string& x, const SessionType& s);

std::vector<std::string> free_vars(const SessionType& t);

/// Unfolds head recursion until the term is not a Rec. Requires guardedness.
SessionType unfold_head(SessionType t);

std::string pretty(const SessionType& t);

bool has_recursion(const SessionType& t);

/// Replaces every recursion by its `depth`-fold unrolling, cutting with Horizon.
/// Each rec binder is unrolled `depth` times per entry, matching the fixpoint
/// approximants produced by the event-structure denotation.
SessionType approximate(const SessionType& t, int depth);

}  // namespace sesgame
