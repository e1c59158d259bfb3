#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "ltlmon/automata.hpp"

namespace ltlmon {

std::string print_hoa(const RabinAutomaton& a, std::string_view name) {
  std::ostringstream os;
  const std::size_t k = a.pairs().size();
  os << "HOA: v1\n";
  if (!name.empty()) os << "name: \"" << name << "\"\n";
  os << "States: " << a.num_states() << "\n";
  os << "Start: " << a.initial() << "\n";
  os << "AP: " << a.ap().size();
  for (const auto& n : a.ap().names()) os << " \"" << n << "\"";
  os << "\n";
  os << "acc-name: Rabin " << k << "\n";
  os << "Acceptance: " << 2 * k;
  if (k == 0) os << " f";
  if (k == 1) os << " Fin(0) & Inf(1)";
  for (std::size_t i = 0; k > 1 && i < k; ++i)
    os << (i ? " | " : " ") << "(Fin(" << 2 * i << ") & Inf(" << 2 * i + 1 << "))";
  os << "\n";
  os << "properties: deterministic complete state-acc explicit-labels\n";
  os << "--BODY--\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    os << "State: " << q;
    std::vector<std::size_t> sets;
    for (std::size_t i = 0; i < k; ++i) {
      if (a.pairs()[i].fin[q]) sets.push_back(2 * i);
      if (a.pairs()[i].inf[q]) sets.push_back(2 * i + 1);
    }
    if (!sets.empty()) {
      os << " {";
      for (std::size_t j = 0; j < sets.size(); ++j) os << (j ? " " : "") << sets[j];
      os << "}";
    }
    os << "\n";
    for (Letter l = 0; l < a.letter_count(); ++l) {
      os << "[";
      if (a.ap().size() == 0) os << "t";
      for (std::size_t i = 0; i < a.ap().size(); ++i)
        os << (i ? "&" : "") << ((l >> i) & 1 ? "" : "!") << i;
      os << "] " << a.next(q, l) << "\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

namespace {

struct Token {
  enum Kind { Header, Word, String, Int, Punct, BodyStart, BodyEnd, End } kind;
  std::string text;
  std::size_t line;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1;
  auto fail = [&](const std::string& msg) {
    throw FormatError("HOA line " + std::to_string(line) + ": " + msg);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos) fail("unterminated comment");
      line += std::count(src.begin() + i, src.begin() + end, '\n');
      i = end + 2;
      continue;
    }
    if (c == '"') {
      std::string s;
      ++i;
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\\' && i + 1 < src.size()) ++i;
        if (src[i] == '\n') ++line;
        s += src[i++];
      }
      if (i >= src.size()) fail("unterminated string");
      ++i;
      out.push_back({Token::String, s, line});
      continue;
    }
    if (src.substr(i, 8) == "--BODY--") {
      out.push_back({Token::BodyStart, "--BODY--", line});
      i += 8;
      continue;
    }
    if (src.substr(i, 7) == "--END--") {
      out.push_back({Token::BodyEnd, "--END--", line});
      i += 7;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) s += src[i++];
      out.push_back({Token::Int, s, line});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      std::string s;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' ||
                                src[i] == '-' || src[i] == '@'))
        s += src[i++];
      if (i < src.size() && src[i] == ':') {
        ++i;
        out.push_back({Token::Header, s, line});
      } else {
        out.push_back({Token::Word, s, line});
      }
      continue;
    }
    if (std::string_view("[]{}()!&|").find(c) != std::string_view::npos) {
      out.push_back({Token::Punct, std::string(1, c), line});
      ++i;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::End, "", line});
  return out;
}

class HoaParser {
 public:
  explicit HoaParser(std::vector<Token> toks) : t_(std::move(toks)) {}

  RabinAutomaton parse() {
    parse_header();
    parse_body();
    return build();
  }

 private:
  // ---- token helpers
  const Token& cur() const { return t_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("HOA line " + std::to_string(cur().line) + ": " + msg);
  }
  bool is_punct(const char* p) const { return cur().kind == Token::Punct && cur().text == p; }
  void expect_punct(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    ++pos_;
  }
  std::size_t expect_int() {
    if (cur().kind != Token::Int) fail("expected an integer");
    return std::stoul(t_[pos_++].text);
  }

  // ---- header
  void parse_header() {
    if (cur().kind != Token::Header || cur().text != "HOA") fail("missing 'HOA:' header");
    ++pos_;
    if (cur().kind != Token::Word || cur().text != "v1") fail("unsupported HOA version");
    ++pos_;
    while (cur().kind != Token::BodyStart) {
      if (cur().kind == Token::End) fail("missing --BODY--");
      if (cur().kind != Token::Header) fail("malformed header item '" + cur().text + "'");
      std::string key = t_[pos_++].text;
      if (key == "States") {
        num_states_ = expect_int();
        have_states_ = true;
      } else if (key == "Start") {
        start_line_ = cur().line;
        starts_.push_back(expect_int());
        if (is_punct("&")) fail("conjunctive start states are not supported");
      } else if (key == "AP") {
        std::size_t n = expect_int();
        std::vector<std::string> names;
        while (cur().kind == Token::String) names.push_back(t_[pos_++].text);
        if (names.size() != n) fail("AP count does not match the listed names");
        try {
          ap_ = ApSet(names);
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      } else if (key == "Acceptance") {
        num_sets_ = expect_int();
        parse_acceptance();
        have_acceptance_ = true;
      } else if (key == "Alias") {
        fail("aliases are not supported");
      } else {
        skip_header_values();
      }
    }
    ++pos_;
    if (!have_acceptance_) fail("missing 'Acceptance:' header");
    if (starts_.size() != 1) fail("exactly one start state is required");
  }

  void skip_header_values() {
    while (cur().kind != Token::Header && cur().kind != Token::BodyStart && cur().kind != Token::End)
      ++pos_;
  }

  // Disjunction of terms; each term is Fin(x)&Inf(y), Inf(y)&Fin(x), Inf(y), t or f.
  void parse_acceptance() {
    if (cur().kind == Token::Word && (cur().text == "t" || cur().text == "f")) {
      if (cur().text == "t") pairs_.push_back({std::nullopt, std::nullopt, true});
      ++pos_;
      return;
    }
    for (;;) {
      bool paren = is_punct("(");
      if (paren) ++pos_;
      AccTerm term;
      for (;;) {
        if (cur().kind != Token::Word || (cur().text != "Fin" && cur().text != "Inf"))
          fail("unsupported acceptance shape");
        bool fin = cur().text == "Fin";
        ++pos_;
        expect_punct("(");
        if (is_punct("!")) fail("unsupported acceptance shape (complemented set)");
        std::size_t set = expect_int();
        expect_punct(")");
        if (set >= num_sets_) fail("acceptance set " + std::to_string(set) + " is not declared");
        auto& slot = fin ? term.fin : term.inf;
        if (slot) fail("unsupported acceptance shape");
        slot = set;
        if (!is_punct("&")) break;
        ++pos_;
      }
      if (!term.inf) fail("unsupported acceptance shape (term without Inf)");
      pairs_.push_back(term);
      if (paren) expect_punct(")");
      if (!is_punct("|")) break;
      ++pos_;
    }
  }

  // ---- labels
  struct Expr {
    enum Kind { True, False, Var, Not, And, Or } kind;
    std::size_t var = 0;
    std::vector<Expr> kids;
    bool eval(Letter l) const {
      switch (kind) {
        case True: return true;
        case False: return false;
        case Var: return (l >> var) & 1;
        case Not: return !kids[0].eval(l);
        case And: return kids[0].eval(l) && kids[1].eval(l);
        case Or: return kids[0].eval(l) || kids[1].eval(l);
      }
      return false;
    }
  };

  Expr label_or() {
    Expr e = label_and();
    while (is_punct("|")) {
      ++pos_;
      e = Expr{Expr::Or, 0, {e, label_and()}};
    }
    return e;
  }
  Expr label_and() {
    Expr e = label_atom();
    while (is_punct("&")) {
      ++pos_;
      e = Expr{Expr::And, 0, {e, label_atom()}};
    }
    return e;
  }
  Expr label_atom() {
    if (is_punct("!")) {
      ++pos_;
      return Expr{Expr::Not, 0, {label_atom()}};
    }
    if (is_punct("(")) {
      ++pos_;
      Expr e = label_or();
      expect_punct(")");
      return e;
    }
    if (cur().kind == Token::Word && cur().text == "t") {
      ++pos_;
      return Expr{Expr::True, 0, {}};
    }
    if (cur().kind == Token::Word && cur().text == "f") {
      ++pos_;
      return Expr{Expr::False, 0, {}};
    }
    if (cur().kind == Token::Int) {
      std::size_t v = expect_int();
      if (v >= ap_.size()) fail("label uses undeclared AP " + std::to_string(v));
      return Expr{Expr::Var, v, {}};
    }
    fail("malformed label");
  }

  std::vector<std::size_t> acc_sets() {
    std::vector<std::size_t> sets;
    if (!is_punct("{")) return sets;
    ++pos_;
    while (!is_punct("}")) {
      std::size_t s = expect_int();
      if (s >= num_sets_) fail("acceptance set " + std::to_string(s) + " is not declared");
      sets.push_back(s);
    }
    ++pos_;
    return sets;
  }

  // ---- body
  struct Edge {
    std::vector<Letter> letters;
    std::size_t target;
    std::vector<std::size_t> sets;
    std::size_t line;
  };

  void parse_body() {
    while (cur().kind != Token::BodyEnd) {
      if (cur().kind != Token::Header || cur().text != "State") fail("expected 'State:'");
      ++pos_;
      if (is_punct("[")) fail("state labels are not supported");
      std::size_t q = expect_int();
      if (cur().kind == Token::String) ++pos_;
      std::vector<std::size_t> sets = acc_sets();
      if (have_states_ && q >= num_states_) fail("state " + std::to_string(q) + " out of range");
      if (state_sets_.size() <= q) {
        state_sets_.resize(q + 1);
        edges_.resize(q + 1);
        declared_.resize(q + 1, 0);
      }
      if (declared_[q]) fail("state " + std::to_string(q) + " declared twice");
      declared_[q] = 1;
      state_sets_[q] = sets;
      while (is_punct("[")) {
        ++pos_;
        Expr label = label_or();
        expect_punct("]");
        Edge e;
        e.line = cur().line;
        e.target = expect_int();
        if (is_punct("&")) fail("universal branching is not supported");
        e.sets = acc_sets();
        if (!e.sets.empty()) transition_based_ = true;
        for (Letter l = 0; l < ap_.letter_count(); ++l)
          if (label.eval(l)) e.letters.push_back(l);
        edges_[q].push_back(std::move(e));
      }
      if (cur().kind == Token::Int) fail("implicit edge labels are not supported");
      if (cur().kind == Token::End) fail("missing --END--");
    }
  }

  // ---- assembly
  RabinAutomaton build() {
    std::size_t n = have_states_ ? num_states_ : state_sets_.size();
    state_sets_.resize(n);
    edges_.resize(n);
    const std::size_t letters = ap_.letter_count();
    constexpr std::size_t kMissing = SIZE_MAX;

    // dest[q][l] = (target, marks on that transition)
    std::vector<std::vector<std::pair<std::size_t, std::vector<std::size_t>>>> dest(
        n, std::vector<std::pair<std::size_t, std::vector<std::size_t>>>(letters, {kMissing, {}}));
    for (std::size_t q = 0; q < n; ++q)
      for (const auto& e : edges_[q]) {
        if (e.target >= n) throw FormatError("HOA line " + std::to_string(e.line) + ": edge target " +
                                             std::to_string(e.target) + " out of range");
        for (Letter l : e.letters) {
          if (dest[q][l].first != kMissing)
            throw FormatError("HOA line " + std::to_string(e.line) + ": automaton is not deterministic (state " +
                              std::to_string(q) +
                              ", letter " + ap_.letter_to_string(l) + ")");
          std::vector<std::size_t> marks = e.sets;
          marks.insert(marks.end(), state_sets_[q].begin(), state_sets_[q].end());
          std::sort(marks.begin(), marks.end());
          marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
          dest[q][l] = {e.target, std::move(marks)};
        }
      }
    if (starts_[0] >= n) throw FormatError("HOA line " + std::to_string(start_line_) + ": start state out of range");

    bool needs_sink = false;
    for (std::size_t q = 0; q < n; ++q)
      for (Letter l = 0; l < letters; ++l) needs_sink = needs_sink || dest[q][l].first == kMissing;

    // Resulting states carry acceptance-set memberships.
    std::vector<std::vector<std::size_t>> membership;
    std::vector<std::vector<StateId>> delta;
    std::vector<char> sink;
    StateId initial = 0;

    if (!transition_based_) {
      std::size_t total = n + (needs_sink ? 1 : 0);
      membership.assign(total, {});
      delta.assign(total, std::vector<StateId>(letters, 0));
      for (std::size_t q = 0; q < n; ++q) {
        membership[q] = state_sets_[q];
        for (Letter l = 0; l < letters; ++l)
          delta[q][l] = static_cast<StateId>(dest[q][l].first == kMissing ? n : dest[q][l].first);
      }
      if (needs_sink)
        for (Letter l = 0; l < letters; ++l) delta[n][l] = static_cast<StateId>(n);
      sink.assign(total, 0);
      if (needs_sink) sink[n] = 1;
      initial = static_cast<StateId>(starts_[0]);
    } else {
      // Split states by the marks of the entering transition.
      using Key = std::pair<std::size_t, std::vector<std::size_t>>;
      std::map<Key, StateId> ids;
      std::vector<Key> keys;
      auto id_of = [&](const Key& k) {
        auto [it, fresh] = ids.emplace(k, static_cast<StateId>(keys.size()));
        if (fresh) keys.push_back(k);
        return it->second;
      };
      initial = id_of({starts_[0], {}});
      for (std::size_t i = 0; i < keys.size(); ++i) {
        Key k = keys[i];
        std::vector<StateId> row(letters);
        for (Letter l = 0; l < letters; ++l) {
          if (k.first == kMissing || dest[k.first][l].first == kMissing)
            row[l] = id_of({kMissing, {}});
          else
            row[l] = id_of(dest[k.first][l]);
        }
        delta.push_back(std::move(row));
        membership.push_back(k.second);
        sink.push_back(k.first == kMissing);
      }
    }

    RabinAutomaton a(ap_, delta.size(), initial);
    for (StateId q = 0; q < delta.size(); ++q)
      for (Letter l = 0; l < letters; ++l) a.set_transition(q, l, delta[q][l]);
    for (const auto& term : pairs_) {
      RabinPair p{std::vector<char>(delta.size(), 0), std::vector<char>(delta.size(), 0)};
      for (StateId q = 0; q < delta.size(); ++q) {
        const auto& m = membership[q];
        auto has = [&](std::size_t s) { return std::find(m.begin(), m.end(), s) != m.end(); };
        if (term.all) p.inf[q] = !sink[q];
        if (term.inf) p.inf[q] = has(*term.inf);
        if (term.fin) p.fin[q] = has(*term.fin);
      }
      a.add_pair(std::move(p));
    }
    return a;
  }

  struct AccTerm {
    std::optional<std::size_t> fin;
    std::optional<std::size_t> inf;
    bool all = false;
  };

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  ApSet ap_;
  std::size_t num_states_ = 0;
  bool have_states_ = false;
  bool have_acceptance_ = false;
  bool transition_based_ = false;
  std::size_t num_sets_ = 0;
  std::vector<std::size_t> starts_;
  std::size_t start_line_ = 0;
  std::vector<AccTerm> pairs_;
  std::vector<std::vector<std::size_t>> state_sets_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<char> declared_;
};

}  // namespace

RabinAutomaton parse_hoa(std::string_view text) { return HoaParser(tokenize(text)).parse(); }

}  // namespace ltlmon
