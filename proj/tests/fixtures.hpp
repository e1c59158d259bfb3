#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

#include "ltlmon/automata.hpp"
#include "ltlmon/markov.hpp"
#include "ltlmon/monitor.hpp"

namespace fixtures {

using namespace ltlmon;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MarkovChain running_chain() { return parse_chain(read_file(std::string(LTLMON_DATA_DIR) + "/fig1.chain")); }

// Two states: 0 = "circle" (initial), 1 = "bullet"; reading {P} leads to 1, reading {} to 0.
// One pair with F = {1}, G = {0}.
inline RabinAutomaton running_dra() {
  RabinAutomaton a(ApSet({"P"}), 2, 0);
  for (StateId q = 0; q < 2; ++q) {
    a.set_transition(q, 0, 0);
    a.set_transition(q, 1, 1);
  }
  a.add_pair({1}, {0});
  return a;
}

inline std::shared_ptr<const MonitorAutomaton> running_automaton() {
  return std::make_shared<const MonitorAutomaton>(running_dra());
}

// System states are the letters a..g (index ch - 'a'); P holds in b, d, e, f.
inline Letter running_letter(char ch) { return std::string_view("bdef").find(ch) != std::string_view::npos ? 1 : 0; }

template <class M>
void feed(M& m, std::string_view states) {
  for (char ch : states) m.observe(static_cast<StateId>(ch - 'a'), running_letter(ch));
}

}  // namespace fixtures
