#include <algorithm>
#include <deque>

#include "ltlmon/automata.hpp"
#include "ltlmon/graph.hpp"

namespace ltlmon {

BuchiAutomaton::BuchiAutomaton(ApSet ap, std::size_t num_states)
    : ap_(std::move(ap)), accepting_(num_states, 0), succ_(num_states * ap_.letter_count()) {}

void BuchiAutomaton::add_initial(StateId s) {
  if (std::find(initial_.begin(), initial_.end(), s) == initial_.end()) initial_.push_back(s);
}

void BuchiAutomaton::set_accepting(StateId s, bool acc) { accepting_.at(s) = acc ? 1 : 0; }

void BuchiAutomaton::add_transition(StateId from, Letter l, StateId to) {
  auto& v = succ_.at(from * letter_count() + l);
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it == v.end() || *it != to) v.insert(it, to);
}

BuchiAutomaton BuchiAutomaton::trimmed() const {
  const std::size_t n = num_states();
  Digraph g(n);
  for (StateId s = 0; s < n; ++s)
    for (Letter l = 0; l < letter_count(); ++l)
      for (StateId t : successors(s, l)) g.add_edge(s, t);
  g.normalize();

  std::vector<char> reach = g.forward_reachable(initial_);
  auto sccs = strongly_connected_components(g);
  std::vector<StateId> seeds;
  for (const auto& comp : sccs) {
    if (!g.is_nontrivial(comp)) continue;
    if (std::any_of(comp.begin(), comp.end(), [&](StateId s) { return accepting(s); }))
      seeds.insert(seeds.end(), comp.begin(), comp.end());
  }
  std::vector<char> live = g.backward_reachable(seeds);

  std::vector<StateId> remap(n, UINT32_MAX);
  std::size_t kept = 0;
  for (StateId s = 0; s < n; ++s)
    if (reach[s] && live[s]) remap[s] = static_cast<StateId>(kept++);

  BuchiAutomaton out(ap_, kept);
  for (StateId s : initial_)
    if (remap[s] != UINT32_MAX) out.add_initial(remap[s]);
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == UINT32_MAX) continue;
    out.set_accepting(remap[s], accepting(s));
    for (Letter l = 0; l < letter_count(); ++l)
      for (StateId t : successors(s, l))
        if (remap[t] != UINT32_MAX) out.add_transition(remap[s], l, remap[t]);
  }
  return out;
}

bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso word has an empty cycle");
  // Product of the automaton with the lasso positions; look for a reachable cycle
  // through an accepting state.
  const std::size_t len = w.length();
  const std::size_t n = a.num_states() * len;
  auto id = [&](StateId s, std::size_t pos) { return static_cast<StateId>(s * len + pos); };
  auto next_pos = [&](std::size_t p) { return p + 1 < len ? p + 1 : w.prefix.size(); };
  Digraph g(n);
  for (StateId s = 0; s < a.num_states(); ++s)
    for (std::size_t p = 0; p < len; ++p)
      for (StateId t : a.successors(s, w.at(p))) g.add_edge(id(s, p), id(t, next_pos(p)));
  g.normalize();
  std::vector<StateId> init;
  for (StateId s : a.initial()) init.push_back(id(s, 0));
  auto reach = g.forward_reachable(init);
  for (const auto& comp : strongly_connected_components(g)) {
    if (!reach[comp.front()] || !g.is_nontrivial(comp)) continue;
    for (StateId v : comp)
      if (a.accepting(v / len)) return true;
  }
  return false;
}

}  // namespace ltlmon
