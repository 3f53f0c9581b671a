#include "sesgame/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace sesgame {

ActionLabel ActionLabel::co() const {
  switch (polarity) {
    case Polarity::Input:
      return output(name);
    case Polarity::Output:
      return input(name);
    case Polarity::Tick:
      break;
  }
  throw std::logic_error("the success action has no co-action");
}

std::string ActionLabel::str() const {
  switch (polarity) {
    case Polarity::Input:
      return "?" + name;
    case Polarity::Output:
      return "!" + name;
    case Polarity::Tick:
      break;
  }
  return "✓";
}

namespace {
std::shared_ptr<const TypeNode> make(TypeNode n) { return std::make_shared<const TypeNode>(std::move(n)); }
}  // namespace

SessionType::SessionType() : node_(make(Success{})) {}

bool operator==(const SessionType& a, const SessionType& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (auto c = a.as<Choice>()) {
    auto d = b.as<Choice>();
    if (c->polarity != d->polarity || c->branches.size() != d->branches.size()) return false;
    for (std::size_t i = 0; i < c->branches.size(); ++i) {
      if (c->branches[i].action != d->branches[i].action || !(c->branches[i].cont == d->branches[i].cont))
        return false;
    }
    return true;
  }
  if (auto r = a.as<Rec>()) {
    auto s = b.as<Rec>();
    return r->var == s->var && r->body == s->body;
  }
  if (auto v = a.as<Var>()) return v->name == b.as<Var>()->name;
  if (auto f = a.as<Buffer>()) {
    auto g = b.as<Buffer>();
    return f->action == g->action && f->cont == g->cont;
  }
  return true;  // Success, Term0, Horizon
}

namespace st {
SessionType success() { return SessionType(make(Success{})); }
SessionType term0() { return SessionType(make(Term0{})); }
SessionType horizon() { return SessionType(make(Horizon{})); }
SessionType var(std::string name) { return SessionType(make(Var{std::move(name)})); }
SessionType rec(std::string v, SessionType body) { return SessionType(make(Rec{std::move(v), std::move(body)})); }
SessionType buffer(std::string action, SessionType cont) {
  return SessionType(make(Buffer{std::move(action), std::move(cont)}));
}
SessionType internal(std::vector<Branch> branches) {
  return SessionType(make(Choice{Polarity::Output, std::move(branches)}));
}
SessionType external(std::vector<Branch> branches) {
  return SessionType(make(Choice{Polarity::Input, std::move(branches)}));
}
SessionType send(std::string action, SessionType cont) { return internal({{std::move(action), std::move(cont)}}); }
SessionType recv(std::string action, SessionType cont) { return external({{std::move(action), std::move(cont)}}); }
}  // namespace st

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(Kind kind, std::size_t pos, const std::string& msg)
    : std::runtime_error("at " + std::to_string(pos) + ": " + msg), kind_(kind), pos_(pos) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : src_(s) {}

  SessionType parse_all() {
    auto t = parse_choice();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

 private:
  enum class Op { None, Internal, External };

  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, ParseError::Kind k = ParseError::Kind::Syntax) const {
    throw ParseError(k, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return src_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

  bool peek_ident() {
    skip_ws();
    return pos_ < src_.size() && ident_start(src_[pos_]);
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= src_.size() || !ident_start(src_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  // Keyword "rec" only when followed by a non-identifier character.
  bool peek_rec() {
    skip_ws();
    if (src_.substr(pos_, 3) != "rec") return false;
    return pos_ + 3 >= src_.size() || !ident_char(src_[pos_ + 3]);
  }

  Op peek_op() {
    if (peek("(+)")) return Op::Internal;
    if (peek("+")) return Op::External;
    return Op::None;
  }

  SessionType parse_choice() {
    std::size_t start = pos_;
    auto first = parse_seq();
    Op op = peek_op();
    if (op == Op::None) return first;

    std::vector<std::pair<SessionType, std::size_t>> operands{{first, start}};
    while (true) {
      Op next = peek_op();
      if (next == Op::None) break;
      if (next != op) fail("internal and external choice mixed at one level", ParseError::Kind::MixedChoice);
      pos_ += (op == Op::Internal) ? 3 : 1;
      skip_ws();
      std::size_t at = pos_;
      operands.emplace_back(parse_seq(), at);
    }

    Polarity want = op == Op::Internal ? Polarity::Output : Polarity::Input;
    std::vector<Branch> branches;
    std::set<std::string> seen;
    for (auto& [t, at] : operands) {
      auto c = t.as<Choice>();
      if (!c) throw ParseError(ParseError::Kind::Polarity, at, "choice branch must be an action prefix");
      if (c->polarity != want)
        throw ParseError(ParseError::Kind::Polarity, at,
                         op == Op::Internal ? "internal choice branch must be an output"
                                            : "external choice branch must be an input");
      for (const auto& b : c->branches) {
        if (!seen.insert(b.action).second)
          throw ParseError(ParseError::Kind::DuplicateAction, at, "duplicate action '" + b.action + "' in choice");
        branches.push_back(b);
      }
    }
    return SessionType(make(Choice{want, std::move(branches)}));
  }

  SessionType parse_seq() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '!' || c == '?') {
      ++pos_;
      std::string a = ident();
      SessionType cont = st::success();
      if (accept(".")) cont = parse_seq();
      return c == '!' ? st::send(a, cont) : st::recv(a, cont);
    }
    if (c == '1') {
      ++pos_;
      return st::success();
    }
    if (c == '(') {
      if (peek("(+)")) fail("choice operator without left operand");
      ++pos_;
      auto t = parse_choice();
      expect(")");
      return t;
    }
    if (peek_rec()) {
      pos_ += 3;
      std::string x = ident();
      expect(".");
      return st::rec(x, parse_choice());
    }
    if (peek_ident()) return st::var(ident());
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

SessionType parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

enum class Ctx { Top, Cont, Branch };

void print(std::ostringstream& out, const SessionType& t, Ctx ctx) {
  if (t.is<Success>()) {
    out << "1";
  } else if (t.is<Term0>()) {
    out << "0";
  } else if (t.is<Horizon>()) {
    out << "...";
  } else if (auto v = t.as<Var>()) {
    out << v->name;
  } else if (auto r = t.as<Rec>()) {
    bool paren = ctx != Ctx::Top;
    if (paren) out << "(";
    out << "rec " << r->var << " . ";
    print(out, r->body, Ctx::Top);
    if (paren) out << ")";
  } else if (auto b = t.as<Buffer>()) {
    out << "[!" << b->action << "]";
    print(out, b->cont, Ctx::Cont);
  } else if (auto c = t.as<Choice>()) {
    const char* sigil = c->internal() ? "!" : "?";
    bool paren = c->branches.size() > 1 && ctx != Ctx::Top;
    if (paren) out << "(";
    for (std::size_t i = 0; i < c->branches.size(); ++i) {
      if (i) out << (c->internal() ? " (+) " : " + ");
      const auto& br = c->branches[i];
      out << sigil << br.action;
      if (!br.cont.is<Success>()) {
        out << ".";
        print(out, br.cont, Ctx::Cont);
      }
    }
    if (paren) out << ")";
  }
}

}  // namespace

std::string pretty(const SessionType& t) {
  std::ostringstream out;
  print(out, t, Ctx::Top);
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void collect_free(const SessionType& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (auto v = t.as<Var>()) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (auto r = t.as<Rec>()) {
    bool fresh = bound.insert(r->var).second;
    collect_free(r->body, bound, out);
    if (fresh) bound.erase(r->var);
  } else if (auto c = t.as<Choice>()) {
    for (const auto& b : c->branches) collect_free(b.cont, bound, out);
  } else if (auto b = t.as<Buffer>()) {
    collect_free(b->cont, bound, out);
  }
}

// Variables that occur free in t without an enclosing action prefix.
void unguarded_vars(const SessionType& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (auto v = t.as<Var>()) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (auto r = t.as<Rec>()) {
    bool fresh = bound.insert(r->var).second;
    unguarded_vars(r->body, bound, out);
    if (fresh) bound.erase(r->var);
  }
}

void check(const SessionType& t, std::set<std::string>& scope, std::vector<Violation>& out) {
  if (auto v = t.as<Var>()) {
    if (!scope.count(v->name)) out.push_back({"free-variable", pretty(t)});
  } else if (auto r = t.as<Rec>()) {
    std::set<std::string> bound, unguarded;
    unguarded_vars(r->body, bound, unguarded);
    if (unguarded.count(r->var)) out.push_back({"unguarded-recursion", pretty(t)});
    bool fresh = scope.insert(r->var).second;
    check(r->body, scope, out);
    if (fresh) scope.erase(r->var);
  } else if (auto c = t.as<Choice>()) {
    if (c->branches.empty()) out.push_back({"empty-choice", pretty(t)});
    std::set<std::string> seen;
    for (const auto& b : c->branches) {
      if (!seen.insert(b.action).second) out.push_back({"duplicate-action", pretty(t)});
      check(b.cont, scope, out);
    }
  } else if (t.is<Buffer>() || t.is<Term0>() || t.is<Horizon>()) {
    out.push_back({"runtime-form", pretty(t)});
  }
}

}  // namespace

std::vector<Violation> validate(const SessionType& t) {
  std::vector<Violation> out;
  std::set<std::string> scope;
  check(t, scope, out);
  return out;
}

void require_valid(const SessionType& t) {
  auto v = validate(t);
  if (v.empty()) return;
  std::string msg = "invalid session type:";
  for (const auto& x : v) msg += " " + x.rule + " in '" + x.subterm + "';";
  throw std::invalid_argument(msg);
}

std::vector<std::string> free_vars(const SessionType& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

void all_names(const SessionType& t, std::set<std::string>& out) {
  if (auto v = t.as<Var>()) {
    out.insert(v->name);
  } else if (auto r = t.as<Rec>()) {
    out.insert(r->var);
    all_names(r->body, out);
  } else if (auto c = t.as<Choice>()) {
    for (const auto& b : c->branches) all_names(b.cont, out);
  } else if (auto b = t.as<Buffer>()) {
    all_names(b->cont, out);
  }
}

SessionType subst(const SessionType& t, const std::string& x, const SessionType& s,
                  const std::set<std::string>& fv_s) {
  if (auto v = t.as<Var>()) return v->name == x ? s : t;
  if (auto r = t.as<Rec>()) {
    if (r->var == x) return t;
    if (fv_s.count(r->var)) {
      std::set<std::string> avoid = fv_s;
      all_names(r->body, avoid);
      avoid.insert(x);
      std::string y = fresh_name(r->var, avoid);
      auto renamed = subst(r->body, r->var, st::var(y), {y});
      return st::rec(y, subst(renamed, x, s, fv_s));
    }
    return st::rec(r->var, subst(r->body, x, s, fv_s));
  }
  if (auto c = t.as<Choice>()) {
    std::vector<Branch> bs;
    bs.reserve(c->branches.size());
    for (const auto& b : c->branches) bs.push_back({b.action, subst(b.cont, x, s, fv_s)});
    return SessionType(make(Choice{c->polarity, std::move(bs)}));
  }
  if (auto b = t.as<Buffer>()) return st::buffer(b->action, subst(b->cont, x, s, fv_s));
  return t;
}

}  // namespace

SessionType substitute(const SessionType& t, const std::string& x, const SessionType& s) {
  auto fv = free_vars(s);
  return subst(t, x, s, {fv.begin(), fv.end()});
}

SessionType unfold(const SessionType& t) {
  auto r = t.as<Rec>();
  if (!r) throw std::invalid_argument("unfold: not a recursion: " + pretty(t));
  return substitute(r->body, r->var, t);
}

SessionType unfold_head(SessionType t) {
  // Guardedness bounds this loop by the number of nested binders.
  for (int guard = 0; t.is<Rec>(); ++guard) {
    if (guard > 10000) throw std::invalid_argument("unguarded recursion: " + pretty(t));
    t = unfold(t);
  }
  return t;
}

bool has_recursion(const SessionType& t) {
  if (t.is<Rec>() || t.is<Var>()) return true;
  if (auto c = t.as<Choice>()) {
    return std::any_of(c->branches.begin(), c->branches.end(),
                       [](const Branch& b) { return has_recursion(b.cont); });
  }
  if (auto b = t.as<Buffer>()) return has_recursion(b->cont);
  return false;
}

// ---------------------------------------------------------------------------
// Finite unrolling

namespace {

struct Binding;
using Env = std::map<std::string, std::shared_ptr<const Binding>>;
struct Binding {
  const Rec* rec;
  Env env;     // environment at the binder
  int remaining;
};

SessionType approx(const SessionType& t, const Env& env, int depth);

SessionType enter(const Rec& r, const Env& env, int remaining, int depth) {
  if (remaining <= 0) return st::horizon();
  Env inner = env;
  inner[r.var] = std::make_shared<const Binding>(Binding{&r, env, remaining - 1});
  return approx(r.body, inner, depth);
}

SessionType approx(const SessionType& t, const Env& env, int depth) {
  if (auto v = t.as<Var>()) {
    auto it = env.find(v->name);
    if (it == env.end()) throw std::invalid_argument("approximate: free variable " + v->name);
    const Binding& b = *it->second;
    return enter(*b.rec, b.env, b.remaining, depth);
  }
  if (auto r = t.as<Rec>()) return enter(*r, env, depth, depth);
  if (auto c = t.as<Choice>()) {
    std::vector<Branch> bs;
    for (const auto& b : c->branches) bs.push_back({b.action, approx(b.cont, env, depth)});
    return SessionType(make(Choice{c->polarity, std::move(bs)}));
  }
  if (auto b = t.as<Buffer>()) return st::buffer(b->action, approx(b->cont, env, depth));
  return t;
}

}  // namespace

SessionType approximate(const SessionType& t, int depth) { return approx(t, {}, depth); }

}  // namespace sesgame
