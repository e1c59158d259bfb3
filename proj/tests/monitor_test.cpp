#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "ltlmon/graph.hpp"
#include "ltlmon/monitor.hpp"

using namespace ltlmon;
using fixtures::feed;

namespace {

StateId id_of(const Monitor& m, StateId q, char sys) {
  for (StateId r = 0; r < m.num_states(); ++r)
    if (m.key(r).q == q && m.key(r).s == StateId(sys - 'a')) return r;
  FAIL("no such product state");
  return 0;
}

Monitor run(std::string_view states, double p_min = 0.1) {
  Monitor m(fixtures::running_automaton(), p_min);
  feed(m, states);
  return m;
}

Rational P(const ProductChain& pc, const Monitor& m, StateId q1, char s1, StateId q2, char s2) {
  return pc.chain.probability(id_of(m, q1, s1), id_of(m, q2, s2));
}

}  // namespace

TEST_CASE("transition counts of pi_1") {
  Monitor m = run("aaabcaab");
  CHECK(m.transitions(id_of(m, 0, 'a'), id_of(m, 0, 'a')) == 3);
  CHECK(m.transitions(id_of(m, 0, 'a'), id_of(m, 0, 'b')) == 2);
  CHECK(m.transitions(id_of(m, 0, 'b'), id_of(m, 1, 'c')) == 1);
  CHECK(m.transitions(id_of(m, 1, 'c'), id_of(m, 0, 'a')) == 1);
  CHECK(m.exits(id_of(m, 0, 'a')) == 5);
  CHECK(m.exits(id_of(m, 0, 'b')) == 1);
  CHECK(m.closed());
}

TEST_CASE("open traces") {
  Monitor one = run("a");
  CHECK_FALSE(one.closed());
  CHECK(one.verdict() == Verdict::Unknown);
  Monitor ab = run("ab");
  CHECK_FALSE(ab.closed());
  CHECK(ab.verdict() == Verdict::Unknown);
  Confidence c = ab.confidence();
  CHECK(c.infinite);
  CHECK(c.vacuous);
  CHECK(std::isinf(c.log_gamma));
  CHECK_THROWS(induced_chain(ab));
}

TEST_CASE("induced chains of the running examples") {
  Monitor m1 = run("aaabcaab");
  ProductChain c1 = induced_chain(m1);
  CHECK(validate(c1.chain).empty());
  CHECK(P(c1, m1, 0, 'a', 0, 'a') == Rational(3, 5));
  CHECK(P(c1, m1, 0, 'a', 0, 'b') == Rational(2, 5));
  CHECK(P(c1, m1, 0, 'b', 1, 'c') == 1);
  CHECK(P(c1, m1, 1, 'c', 0, 'a') == 1);

  Monitor m2 = run("aaaaabdeedeedee");
  ProductChain c2 = induced_chain(m2);
  CHECK(P(c2, m2, 0, 'a', 0, 'a') == Rational(4, 5));
  CHECK(P(c2, m2, 0, 'a', 0, 'b') == Rational(1, 5));
  CHECK(P(c2, m2, 0, 'b', 1, 'd') == 1);
  CHECK(P(c2, m2, 1, 'd', 1, 'e') == 1);
  // Counts in d(ee)(d ee)(d ee): e->e three times, e->d twice.
  CHECK(P(c2, m2, 1, 'e', 1, 'e') == Rational(3, 5));
  CHECK(P(c2, m2, 1, 'e', 1, 'd') == Rational(2, 5));

  Monitor aa = run("aa");
  ProductChain c3 = induced_chain(aa);
  CHECK(c3.chain.size() == 1);
  CHECK(c3.chain.probability(0, 0) == 1);
}

TEST_CASE("induced chain names use the system names when given") {
  std::vector<std::string> names{"a", "b", "c", "d", "e", "f", "g"};
  ProductChain pc = induced_chain(run("aaabcaab"), &names);
  CHECK(pc.chain.name(0) == "a@0");
  CHECK(induced_chain(run("aaabcaab")).chain.name(0) == "s0@0");
}

TEST_CASE("verdicts and confidence of pi_1, pi_2, pi_3") {
  struct Case {
    const char* trace;
    Verdict verdict;
    std::uint64_t m;
    Rational gamma;
  };
  for (const Case& k : {Case{"aaabcaab", Verdict::False, 1, Rational(10, 9)},
                        Case{"aaaaabdeedeedee", Verdict::True, 3, Rational(1000, 729)},
                        Case{"aabcffffgfgf", Verdict::False, 2, Rational(100, 81)}}) {
    Monitor m = run(k.trace);
    CHECK(m.closed());
    CHECK(m.verdict() == k.verdict);
    Confidence c = m.confidence();
    CHECK_FALSE(c.infinite);
    CHECK(c.m == k.m);
    CHECK(gamma_exact(c.m, Rational(1, 10)) == k.gamma);
    CHECK(c.log_gamma == doctest::Approx(std::log(k.gamma.convert_to<double>())).epsilon(1e-12));
  }
}

TEST_CASE("confidence edge cases") {
  CHECK(std::isinf(log_gamma_per_visit(1.0)));
  Confidence z = make_confidence(0, 1.0);
  CHECK_FALSE(z.infinite);
  CHECK(z.log_gamma == 0.0);
  Confidence one = make_confidence(1, 1.0);
  CHECK(one.infinite);
  CHECK_FALSE(one.vacuous);
  CHECK(make_confidence(56, 0.08).log_gamma >= std::log(100.0));
  CHECK(make_confidence(55, 0.08).log_gamma < std::log(100.0));
}

TEST_CASE("universal and empty automaton states override closedness") {
  auto fp = std::make_shared<const MonitorAutomaton>(translate(parse_ltl("F P")));
  Monitor m(fp, 0.1);
  feed(m, "ba");
  CHECK_FALSE(m.closed());
  CHECK(m.verdict() == Verdict::True);
  CHECK(m.confidence().infinite);
  CHECK_FALSE(m.confidence().vacuous);

  auto gp = std::make_shared<const MonitorAutomaton>(translate(parse_ltl("G P")));
  Monitor g(gp, 0.1);
  feed(g, "bac");
  CHECK(g.verdict() == Verdict::False);
  CHECK(g.confidence().infinite);
}

TEST_CASE("likelihood") {
  Monitor m1 = run("aaabcaab");
  ProductChain c1 = induced_chain(m1);
  CHECK(likelihood(c1.chain, m1.trace()) == doctest::Approx(std::log(108.0 / 3125.0)).epsilon(1e-12));
  MarkovChain ab = parse_chain("state a\nstate b\ninit a 1\ntrans a b 1\ntrans b a 1\n");
  CHECK(likelihood(ab, {0, 1, 0, 1}) == 0.0);
  CHECK(likelihood(ab, {0, 0}) == -INFINITY);
  CHECK(likelihood(ab, {1, 0}) == -INFINITY);
}

TEST_CASE("maximum likelihood, zero-one law and tightness on the running examples") {
  std::mt19937_64 rng(4);
  for (const char* t : {"aaabcaab", "aaaaabdeedeedee", "aabcffffgfgf", "aa", "abcfgffgf"}) {
    Monitor m = run(t);
    REQUIRE(m.closed());
    ProductChain pc = induced_chain(m);
    const double best = likelihood(pc.chain, m.trace());
    for (int k = 0; k < 200; ++k) {
      MarkovChain other;
      for (StateId s = 0; s < pc.chain.size(); ++s) other.add_state(pc.chain.name(s));
      other.add_initial(0, 1);
      for (StateId s = 0; s < pc.chain.size(); ++s) {
        const auto& row = pc.chain.row(s);
        std::vector<long> w(row.size());
        long total = 0;
        for (auto& x : w) total += (x = 1 + static_cast<long>(rng() % 1000));
        for (std::size_t i = 0; i < row.size(); ++i) other.add_transition(s, row[i].to, Rational(w[i], total));
      }
      CHECK(likelihood(other, m.trace()) <= best + 1e-9);
    }
    Rational vp = verdict_probability(pc, m.trace());
    CHECK((vp == 0 || vp == 1));
    CHECK((vp == 1) == (m.verdict() == Verdict::True));

    const auto bottom = m.bottom_component();
    StateId arg = *std::min_element(bottom.begin(), bottom.end(),
                                    [&](StateId x, StateId y) { return m.exits(x) < m.exits(y); });
    ProductChain esc = escape_chain(pc, arg, Rational(1, 10));
    double ratio = std::exp(best - likelihood(esc.chain, m.trace()));
    double gamma = std::pow(10.0 / 9.0, static_cast<double>(m.confidence().m));
    CHECK(ratio == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(verdict_probability(esc, m.trace()) == 0);
    ProductChain tiny = escape_chain(pc, arg, Rational(1, 1000000000));
    CHECK(std::exp(best - likelihood(tiny.chain, m.trace())) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("escape chain preconditions") {
  Monitor m = run("aaabcaab");
  ProductChain pc = induced_chain(m);
  CHECK_THROWS(escape_chain(pc, 0, Rational(0)));
  CHECK_THROWS(escape_chain(pc, 0, Rational(1)));
  Monitor m3 = run("aabcffffgfgf");
  CHECK_THROWS(escape_chain(induced_chain(m3), id_of(m3, 0, 'a'), Rational(1, 10)));
}

TEST_CASE("verdict probability on the full running-example product") {
  ProductChain pc = product(fixtures::running_dra(), fixtures::running_chain());
  StateId a0 = *pc.chain.find("a@0");
  Rational v = verdict_probability(pc, {a0});
  CHECK(v > 0);
  CHECK(v < 1);
  CHECK(v == Rational(5, 7));
  CHECK_THROWS(verdict_probability(pc, {a0, *pc.chain.find("d@1")}));
}

TEST_CASE("the trace graph has a unique bottom SCC matching Tarjan") {
  MarkovChain c = fixtures::running_chain();
  auto automaton = fixtures::running_automaton();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto states = sample_run(c, seed, 1 + seed * 7);
    Monitor m(automaton, 0.1);
    for (StateId s : states) m.observe(s, automaton->dra.ap().letter_of(c.props(s)));
    Digraph g(m.num_states());
    for (std::size_t i = 1; i < m.trace().size(); ++i) g.add_edge(m.trace()[i - 1], m.trace()[i]);
    g.normalize();
    auto sccs = strongly_connected_components(g);
    std::vector<std::vector<std::uint32_t>> bottoms;
    for (auto& scc : sccs) {
      std::set<std::uint32_t> in(scc.begin(), scc.end());
      bool leaves = false;
      for (auto v : scc)
        for (auto w : g.successors(v)) leaves |= !in.count(w);
      if (!leaves) {
        std::sort(scc.begin(), scc.end());
        bottoms.push_back(scc);
      }
    }
    REQUIRE(bottoms.size() == 1);
    CHECK(m.num_components() == sccs.size());
    CHECK(m.bottom_component() == bottoms[0]);
  }
}

TEST_CASE("sampled runs: divergence and no Unknown after coverage") {
  MarkovChain c = fixtures::running_chain();
  ProductChain pc = product(fixtures::running_dra(), c);
  SccDecomposition d = scc_decompose(pc);
  auto automaton = fixtures::running_automaton();
  int diverged = 0;
  const int runs = 200;
  for (int i = 0; i < runs; ++i) {
    Sampler sampler(pc.chain, mix_seed(i));
    Monitor m(automaton, 0.1, false);
    std::set<StateId> seen, seen_bottom;
    bool covered = false;
    StateId r = sampler.start();
    for (int k = 0; k < 10000; ++k) {
      if (k) r = sampler.step(r);
      bool revisit = !seen.insert(r).second;
      m.observe(pc.system_state[r], automaton->dra.ap().letter_of(c.props(pc.system_state[r])));
      auto comp = d.component_of[r];
      if (d.bottom[comp]) {
        seen_bottom.insert(r);
        if (seen_bottom.size() == d.components[comp].size() && revisit) covered = true;
      }
      if (covered) REQUIRE(m.verdict() != Verdict::Unknown);
    }
    REQUIRE(covered);
    CHECK((m.verdict() == Verdict::True) == static_cast<bool>(d.good[d.component_of[r]]));
    diverged += m.confidence().m >= 100;
  }
  CHECK(diverged >= 198);
}
