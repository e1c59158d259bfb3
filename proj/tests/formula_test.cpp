#include <random>

#include "doctest.h"
#include "ltlmon/formula.hpp"
#include "ltlmon/lasso.hpp"
#include "ltlmon/oracle.hpp"

using namespace ltlmon;

namespace {

Formula p() { return Formula::atom("p"); }

bool is_nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not:
      return f.child(0).kind() == FormulaKind::Atom;
    default:
      for (std::size_t i = 0; i < f.arity(); ++i)
        if (!is_nnf(f.child(i))) return false;
      return true;
  }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse_ltl("F G p") == Formula::eventually(Formula::always(p())));
  CHECK(parse_ltl("true") == Formula::top());
  CHECK(parse_ltl("false") == Formula::bottom());
  auto r = Formula::atom("r"), a = Formula::atom("a");
  CHECK(parse_ltl("G (r -> F a)") ==
        Formula::always(Formula::disjunction(Formula::negation(r), Formula::eventually(a))));
  CHECK(parse_ltl("p U q U r") ==
        Formula::until(p(), Formula::until(Formula::atom("q"), r)));
}

TEST_CASE("precedence: unary binds tighter than U, U tighter than and, and tighter than or") {
  auto q = Formula::atom("q"), r = Formula::atom("r");
  CHECK(parse_ltl("!p U q") == Formula::until(Formula::negation(p()), q));
  CHECK(parse_ltl("p & q U r") == Formula::conjunction(p(), Formula::until(q, r)));
  CHECK(parse_ltl("p | q & r") == Formula::disjunction(p(), Formula::conjunction(q, r)));
  CHECK(parse_ltl("p AND q OR NOT r") ==
        Formula::disjunction(Formula::conjunction(p(), q), Formula::negation(r)));
}

TEST_CASE("printing round-trips through the parser") {
  for (const char* s : {"F G p", "G (r -> F a)", "p U q", "X X p", "!(a R (b | X c))", "true & false"}) {
    Formula f = parse_ltl(s);
    CHECK(parse_ltl(f.to_string()) == f);
  }
}

TEST_CASE("parse errors carry a position") {
  auto column_of = [](const char* text) {
    try {
      parse_ltl(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return std::size_t{0};
  };
  CHECK(column_of("p U") == 4);
  CHECK(column_of("(p & q") == 7);
  CHECK(column_of("p $ q") == 3);
  try {
    parse_ltl("p &\n  & q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_ltl(""), ParseError);
}

TEST_CASE("nnf pushes negations to atoms") {
  CHECK(to_nnf(parse_ltl("!G p")) == parse_ltl("F !p"));
  CHECK(to_nnf(parse_ltl("!(p U q)")) == parse_ltl("!p R !q"));
  CHECK(to_nnf(parse_ltl("!X p")) == parse_ltl("X !p"));
  CHECK(to_nnf(parse_ltl("!!p")) == p());
  CHECK(to_nnf(parse_ltl("!true")) == Formula::bottom());
  CHECK(to_nnf(parse_ltl("p -> q")) == parse_ltl("!p | q"));
}

TEST_CASE("nnf and simplify preserve lasso semantics") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> atoms{"p", "q"};
  ApSet ap(atoms);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, atoms, 1 + rng() % 12);
    Formula n = to_nnf(f);
    Formula s = simplify(n);
    REQUIRE(is_nnf(n));
    REQUIRE(is_nnf(s));
    CHECK(s.size() <= n.size());
    for (int k = 0; k < 5; ++k) {
      LassoWord w = random_lasso(rng, ap.letter_count(), 5, 5);
      bool expect = lasso_models(w, f, ap);
      CHECK_MESSAGE(lasso_models(w, n, ap) == expect, f.to_string());
      CHECK_MESSAGE(lasso_models(w, s, ap) == expect, f.to_string());
    }
  }
}

TEST_CASE("simplify rewrites") {
  auto simp = [](const char* s) { return simplify(to_nnf(parse_ltl(s))); };
  CHECK(simp("F F p") == parse_ltl("F p"));
  CHECK(simp("G G p") == parse_ltl("G p"));
  CHECK(simp("p & true") == p());
  CHECK(simp("p | true") == Formula::top());
  CHECK(simp("F (q U p)") == parse_ltl("F p"));
  CHECK(simp("G F G p") == parse_ltl("F G p"));
  CHECK(simp("true U p") == parse_ltl("F p"));
}

TEST_CASE("atoms and size") {
  Formula f = parse_ltl("G (r -> F a) & r");
  CHECK(f.atoms() == std::vector<std::string>{"a", "r"});
  CHECK(parse_ltl("p U q").size() == 3);
}
