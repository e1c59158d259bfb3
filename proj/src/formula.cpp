#include "ltlmon/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ltlmon {

Formula Formula::make(FormulaKind kind, std::vector<Formula> children, std::string name) {
  return Formula(std::make_shared<const Node>(Node{kind, std::move(name), std::move(children)}));
}

Formula Formula::atom(std::string name) { return make(FormulaKind::Atom, {}, std::move(name)); }
Formula Formula::top() { return make(FormulaKind::True, {}); }
Formula Formula::bottom() { return make(FormulaKind::False, {}); }
Formula Formula::negation(Formula f) { return make(FormulaKind::Not, {std::move(f)}); }
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make(FormulaKind::And, {std::move(lhs), std::move(rhs)});
}
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return make(FormulaKind::Or, {std::move(lhs), std::move(rhs)});
}
Formula Formula::next(Formula f) { return make(FormulaKind::Next, {std::move(f)}); }
Formula Formula::until(Formula lhs, Formula rhs) {
  return make(FormulaKind::Until, {std::move(lhs), std::move(rhs)});
}
Formula Formula::release(Formula lhs, Formula rhs) {
  return make(FormulaKind::Release, {std::move(lhs), std::move(rhs)});
}
Formula Formula::eventually(Formula f) { return make(FormulaKind::Eventually, {std::move(f)}); }
Formula Formula::always(Formula f) { return make(FormulaKind::Always, {std::move(f)}); }

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::Atom) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_atoms(f.child(i), out);
}

}  // namespace

std::vector<std::string> Formula::atoms() const {
  std::set<std::string> names;
  collect_atoms(*this, names);
  return {names.begin(), names.end()};
}

std::string Formula::to_string() const {
  switch (kind()) {
    case FormulaKind::Atom: return name();
    case FormulaKind::True: return "true";
    case FormulaKind::False: return "false";
    case FormulaKind::Not: return "!" + lhs().to_string();
    case FormulaKind::Next: return "X " + lhs().to_string();
    case FormulaKind::Eventually: return "F " + lhs().to_string();
    case FormulaKind::Always: return "G " + lhs().to_string();
    case FormulaKind::And: return "(" + lhs().to_string() + " & " + rhs().to_string() + ")";
    case FormulaKind::Or: return "(" + lhs().to_string() + " | " + rhs().to_string() + ")";
    case FormulaKind::Until: return "(" + lhs().to_string() + " U " + rhs().to_string() + ")";
    case FormulaKind::Release: return "(" + lhs().to_string() + " R " + rhs().to_string() + ")";
  }
  return {};
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a.child(i) != b.child(i)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Next, Eventually, Always, Until,
                 Release, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          word += advance();
        out.push_back({keyword(word), word, l, c});
        continue;
      }
      switch (ch) {
        case '(': advance(); out.push_back({Tok::LParen, "(", l, c}); break;
        case ')': advance(); out.push_back({Tok::RParen, ")", l, c}); break;
        case '!': advance(); out.push_back({Tok::Not, "!", l, c}); break;
        case '&':
          advance();
          if (peek() == '&') advance();
          out.push_back({Tok::And, "&", l, c});
          break;
        case '|':
          advance();
          if (peek() == '|') advance();
          out.push_back({Tok::Or, "|", l, c});
          break;
        case '-':
          advance();
          if (peek() != '>') throw ParseError("unknown operator '-'", l, c);
          advance();
          out.push_back({Tok::Implies, "->", l, c});
          break;
        default:
          throw ParseError(std::string("unknown operator '") + ch + "'", l, c);
      }
    }
  }

 private:
  static Tok keyword(const std::string& w) {
    if (w == "true") return Tok::True;
    if (w == "false") return Tok::False;
    if (w == "NOT") return Tok::Not;
    if (w == "AND") return Tok::And;
    if (w == "OR") return Tok::Or;
    if (w == "X") return Tok::Next;
    if (w == "F") return Tok::Eventually;
    if (w == "G") return Tok::Always;
    if (w == "U") return Tok::Until;
    if (w == "R") return Tok::Release;
    return Tok::Ident;
  }
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char advance() {
    char ch = src_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = implication();
    if (cur().kind != Tok::End) fail("unexpected token '" + cur().text + "'");
    return f;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().column);
  }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return Formula::disjunction(Formula::negation(lhs), implication());
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disjunction(f, conjunction());
    return f;
  }
  Formula conjunction() {
    Formula f = binary();
    while (accept(Tok::And)) f = Formula::conjunction(f, binary());
    return f;
  }
  Formula binary() {
    Formula lhs = unary();
    if (accept(Tok::Until)) return Formula::until(lhs, binary());
    if (accept(Tok::Release)) return Formula::release(lhs, binary());
    return lhs;
  }
  Formula unary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Not: ++pos_; return Formula::negation(unary());
      case Tok::Next: ++pos_; return Formula::next(unary());
      case Tok::Eventually: ++pos_; return Formula::eventually(unary());
      case Tok::Always: ++pos_; return Formula::always(unary());
      case Tok::True: ++pos_; return Formula::top();
      case Tok::False: ++pos_; return Formula::bottom();
      case Tok::Ident: ++pos_; return Formula::atom(t.text);
      case Tok::LParen: {
        ++pos_;
        Formula f = implication();
        if (!accept(Tok::RParen)) fail("expected ')'");
        return f;
      }
      case Tok::End: fail("unexpected end of formula");
      default: fail("unexpected token '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Formula nnf(const Formula& f, bool negate) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::Atom: return negate ? Formula::negation(f) : f;
    case K::True: return negate ? Formula::bottom() : f;
    case K::False: return negate ? Formula::top() : f;
    case K::Not: return nnf(f.lhs(), !negate);
    case K::And:
      return negate ? Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case K::Or:
      return negate ? Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case K::Next: return Formula::next(nnf(f.lhs(), negate));
    case K::Until:
      return negate ? Formula::release(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::until(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case K::Release:
      return negate ? Formula::until(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::release(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case K::Eventually:
      return negate ? Formula::always(nnf(f.lhs(), true)) : Formula::eventually(nnf(f.lhs(), false));
    case K::Always:
      return negate ? Formula::eventually(nnf(f.lhs(), true)) : Formula::always(nnf(f.lhs(), false));
  }
  return f;
}

}  // namespace

Formula parse_ltl(std::string_view text) { return Parser(Lexer(text).run()).parse(); }

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula simplify(const Formula& f) {
  using K = FormulaKind;
  auto is = [](const Formula& g, K k) { return g.kind() == k; };
  switch (f.kind()) {
    case K::Atom:
    case K::True:
    case K::False:
      return f;
    case K::Not:
      return f;
    case K::Next: {
      Formula a = simplify(f.child(0));
      if (is(a, K::True) || is(a, K::False)) return a;
      return Formula::next(a);
    }
    case K::Eventually: {
      Formula a = simplify(f.child(0));
      if (is(a, K::True) || is(a, K::False) || is(a, K::Eventually)) return a;
      if (is(a, K::Until)) return simplify(Formula::eventually(a.rhs()));
      if (is(a, K::Always) && is(a.child(0), K::Eventually)) return a;
      return Formula::eventually(a);
    }
    case K::Always: {
      Formula a = simplify(f.child(0));
      if (is(a, K::True) || is(a, K::False) || is(a, K::Always)) return a;
      if (is(a, K::Release)) return simplify(Formula::always(a.rhs()));
      if (is(a, K::Eventually) && is(a.child(0), K::Always)) return a;
      return Formula::always(a);
    }
    case K::And: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (is(a, K::False) || is(b, K::True) || a == b) return a;
      if (is(b, K::False) || is(a, K::True)) return b;
      return Formula::conjunction(a, b);
    }
    case K::Or: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (is(a, K::True) || is(b, K::False) || a == b) return a;
      if (is(b, K::True) || is(a, K::False)) return b;
      return Formula::disjunction(a, b);
    }
    case K::Until: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (is(b, K::True) || is(b, K::False) || is(a, K::False) || a == b) return b;
      if (is(a, K::True)) return simplify(Formula::eventually(b));
      return Formula::until(a, b);
    }
    case K::Release: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (is(b, K::True) || is(b, K::False) || is(a, K::True) || a == b) return b;
      if (is(a, K::False)) return simplify(Formula::always(b));
      return Formula::release(a, b);
    }
  }
  return f;
}

}  // namespace ltlmon
