#include <algorithm>
#include <map>

#include "ltlmon/automata.hpp"
#include "ltlmon/graph.hpp"

namespace ltlmon {

RabinAutomaton::RabinAutomaton(ApSet ap, std::size_t num_states, StateId initial)
    : ap_(std::move(ap)),
      num_states_(num_states),
      initial_(initial),
      delta_(num_states * ap_.letter_count(), 0) {
  if (num_states == 0) throw std::invalid_argument("a Rabin automaton needs at least one state");
  if (initial >= num_states) throw std::invalid_argument("initial state out of range");
}

void RabinAutomaton::add_pair(const std::vector<StateId>& inf, const std::vector<StateId>& fin) {
  RabinPair p{std::vector<char>(num_states_, 0), std::vector<char>(num_states_, 0)};
  for (auto q : inf) p.inf.at(q) = 1;
  for (auto q : fin) p.fin.at(q) = 1;
  pairs_.push_back(std::move(p));
}

void RabinAutomaton::add_pair(RabinPair p) {
  if (p.inf.size() != num_states_ || p.fin.size() != num_states_)
    throw std::invalid_argument("Rabin pair sized for a different automaton");
  pairs_.push_back(std::move(p));
}

void RabinAutomaton::check() const {
  for (auto t : delta_)
    if (t >= num_states_) throw std::logic_error("transition target out of range");
  for (const auto& p : pairs_)
    if (p.inf.size() != num_states_ || p.fin.size() != num_states_)
      throw std::logic_error("Rabin pair has the wrong size");
}

const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::Empty: return "empty";
    case StateClass::Universal: return "universal";
    case StateClass::Other: return "other";
  }
  return "?";
}

namespace {

bool rabin_accepts_set(const RabinAutomaton& a, const std::vector<StateId>& inf_set) {
  for (const auto& p : a.pairs()) {
    bool hits_f = false, hits_g = false;
    for (auto q : inf_set) {
      hits_f = hits_f || p.inf[q];
      hits_g = hits_g || p.fin[q];
    }
    if (hits_f && !hits_g) return true;
  }
  return false;
}

Digraph automaton_graph(const RabinAutomaton& a) {
  Digraph g(a.num_states());
  for (StateId q = 0; q < a.num_states(); ++q)
    for (Letter l = 0; l < a.letter_count(); ++l) g.add_edge(q, a.next(q, l));
  g.normalize();
  return g;
}

// Marks states of `keep` lying on some cycle whose state set violates every pair
// (misses F or hits G). Complement of Rabin is Streett; the standard recursive
// decomposition removes F_i states whenever an SCC hits F_i but misses G_i.
void collect_rejecting(const RabinAutomaton& a, const Digraph& g, const std::vector<char>& keep,
                       std::vector<char>& out) {
  Digraph sub = g.induced(keep);
  for (const auto& comp : strongly_connected_components(sub)) {
    if (!keep[comp.front()] || !sub.is_nontrivial(comp)) continue;
    std::vector<char> drop(a.num_states(), 0);
    bool violated = false;
    for (const auto& p : a.pairs()) {
      bool hits_f = false, hits_g = false;
      for (auto q : comp) {
        hits_f = hits_f || p.inf[q];
        hits_g = hits_g || p.fin[q];
      }
      if (hits_f && !hits_g) {
        violated = true;
        for (auto q : comp)
          if (p.inf[q]) drop[q] = 1;
      }
    }
    if (!violated) {
      for (auto q : comp) out[q] = 1;
      continue;
    }
    std::vector<char> rest(a.num_states(), 0);
    for (auto q : comp) rest[q] = !drop[q];
    collect_rejecting(a, g, rest, out);
  }
}

}  // namespace

bool accepts_lasso(const RabinAutomaton& a, const LassoWord& w) {
  return accepts_lasso_from(a, a.initial(), w);
}

bool accepts_lasso_from(const RabinAutomaton& a, StateId start, const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso word has an empty cycle");
  StateId q = start;
  for (Letter l : w.prefix) q = a.next(q, l);
  // Iterate whole cycles until the state at a cycle boundary repeats.
  std::map<StateId, std::size_t> seen_at;
  std::vector<StateId> visited;
  while (!seen_at.count(q)) {
    seen_at[q] = visited.size();
    for (Letter l : w.cycle) {
      visited.push_back(q);
      q = a.next(q, l);
    }
  }
  std::vector<StateId> inf_set(visited.begin() + seen_at[q], visited.end());
  return rabin_accepts_set(a, inf_set);
}

std::vector<StateClass> classify_states(const RabinAutomaton& a) {
  const std::size_t n = a.num_states();
  Digraph g = automaton_graph(a);

  std::vector<StateId> accepting_core;
  for (const auto& p : a.pairs()) {
    std::vector<char> keep(n);
    for (StateId q = 0; q < n; ++q) keep[q] = !p.fin[q];
    Digraph sub = g.induced(keep);
    for (const auto& comp : strongly_connected_components(sub)) {
      if (!keep[comp.front()] || !sub.is_nontrivial(comp)) continue;
      if (std::any_of(comp.begin(), comp.end(), [&](StateId q) { return p.inf[q] != 0; }))
        accepting_core.insert(accepting_core.end(), comp.begin(), comp.end());
    }
  }
  std::vector<char> nonempty = g.backward_reachable(accepting_core);

  std::vector<char> rejecting(n, 0);
  collect_rejecting(a, g, std::vector<char>(n, 1), rejecting);
  std::vector<StateId> rejecting_core;
  for (StateId q = 0; q < n; ++q)
    if (rejecting[q]) rejecting_core.push_back(q);
  std::vector<char> nonuniversal = g.backward_reachable(rejecting_core);

  std::vector<StateClass> out(n, StateClass::Other);
  for (StateId q = 0; q < n; ++q) {
    if (!nonempty[q]) out[q] = StateClass::Empty;
    else if (!nonuniversal[q]) out[q] = StateClass::Universal;
  }
  return out;
}

}  // namespace ltlmon
