#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ltlmon/automata.hpp"
#include "ltlmon/oracle.hpp"

using namespace ltlmon;

TEST_CASE("printed HOA header") {
  std::string text = print_hoa(fixtures::running_dra(), "running");
  CHECK(text.rfind("HOA: v1\n", 0) == 0);
  CHECK(text.find("States: 2\n") != std::string::npos);
  CHECK(text.find("AP: 1 \"P\"\n") != std::string::npos);
  CHECK(text.find("Acceptance: 2 Fin(0) & Inf(1)\n") != std::string::npos);
  CHECK(text.find("acc-name: Rabin 1\n") != std::string::npos);
}

TEST_CASE("parse . print . parse is the identity") {
  std::vector<RabinAutomaton> suite{fixtures::running_dra()};
  for (const char* s : {"F G p", "G F p", "G (r -> F a)", "p U q", "X X p", "true", "false"})
    suite.push_back(translate(parse_ltl(s)));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) suite.push_back(translate(random_formula(rng, {"p", "q"}, 1 + rng() % 9)));
  for (const auto& a : suite) {
    RabinAutomaton b = parse_hoa(print_hoa(a));
    CHECK(b == a);
    CHECK(parse_hoa(print_hoa(b)) == b);
  }
}

TEST_CASE("HOA with transition-based marks and a missing edge") {
  const char* text =
      "HOA: v1\n"
      "States: 1\n"
      "Start: 0\n"
      "AP: 1 \"p\"\n"
      "Acceptance: 1 Inf(0)\n"
      "--BODY--\n"
      "State: 0\n"
      "[0] 0 {0}\n"
      "--END--\n";
  RabinAutomaton a = parse_hoa(text);
  CHECK(accepts_lasso(a, LassoWord{{}, {1}}));
  CHECK_FALSE(accepts_lasso(a, LassoWord{{1, 1}, {1, 0}}));
  Formula gp = parse_ltl("G p");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    LassoWord w = random_lasso(rng, 2, 4, 4);
    CHECK(accepts_lasso(a, w) == lasso_models(w, gp, a.ap()));
  }
}

TEST_CASE("malformed HOA names the line") {
  auto message = [](const char* text) -> std::string {
    try {
      parse_hoa(text);
    } catch (const FormatError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("HOA: v2\n").find("line 1") != std::string::npos);
  CHECK(message("HOA: v1\nStates: 1\nStart: 3\nAP: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0\n--END--\n").find("line 3") != std::string::npos);
  CHECK(message("HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 5\n--END--\n")
            .find("line 8") != std::string::npos);
}
