#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "ltlmon/automata.hpp"

namespace ltlmon {

namespace {

using FormulaId = std::uint32_t;
using FormulaSet = std::vector<FormulaId>;  // sorted, unique

// Hash-consed NNF subformulas. A negated atom is stored as kind Not over an Atom.
struct Node {
  FormulaKind kind;
  FormulaId lhs = 0;
  FormulaId rhs = 0;
  Letter bit = 0;
};

class FormulaTable {
 public:
  explicit FormulaTable(const ApSet& ap) : ap_(ap) {}

  FormulaId intern(const Formula& f) {
    Node n{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Atom: {
        auto idx = ap_.index_of(f.name());
        if (!idx) throw std::invalid_argument("atom '" + f.name() + "' is not in the AP set");
        n.bit = Letter{1} << *idx;
        break;
      }
      case FormulaKind::Not:
        if (f.lhs().kind() != FormulaKind::Atom)
          throw std::invalid_argument("ltl_to_nba expects a formula in negation normal form");
        n.lhs = intern(f.lhs());
        n.bit = nodes_[n.lhs].bit;
        break;
      case FormulaKind::True:
      case FormulaKind::False: break;
      default:
        n.lhs = intern(f.lhs());
        if (f.arity() == 2) n.rhs = intern(f.rhs());
    }
    auto key = std::make_tuple(static_cast<int>(n.kind), n.lhs, n.rhs, n.bit);
    auto [it, fresh] = ids_.emplace(key, static_cast<FormulaId>(nodes_.size()));
    if (fresh) nodes_.push_back(n);
    return it->second;
  }

  const Node& operator[](FormulaId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  const ApSet& ap_;
  std::vector<Node> nodes_;
  std::map<std::tuple<int, FormulaId, FormulaId, Letter>, FormulaId> ids_;
};

// One way of discharging the current obligations in a single step.
struct Expansion {
  Letter pos = 0;        // propositions that must hold
  Letter neg = 0;        // propositions that must not hold
  FormulaSet next;       // obligations for the successor
  FormulaSet postponed;  // eventualities deferred to the successor

  auto key() const { return std::tie(pos, neg, next, postponed); }
  bool operator<(const Expansion& o) const { return key() < o.key(); }
};

void insert_sorted(FormulaSet& s, FormulaId id) {
  auto it = std::lower_bound(s.begin(), s.end(), id);
  if (it == s.end() || *it != id) s.insert(it, id);
}

class Expander {
 public:
  explicit Expander(const FormulaTable& table) : t_(table) {}

  std::set<Expansion> expand(const FormulaSet& obligations) {
    std::set<Expansion> out;
    Branch b;
    b.todo.assign(obligations.begin(), obligations.end());
    run(std::move(b), out);
    return out;
  }

 private:
  struct Branch {
    std::vector<FormulaId> todo;
    FormulaSet done;
    Expansion exp;
  };

  void run(Branch b, std::set<Expansion>& out) {
    while (!b.todo.empty()) {
      FormulaId id = b.todo.back();
      b.todo.pop_back();
      if (std::binary_search(b.done.begin(), b.done.end(), id)) continue;
      insert_sorted(b.done, id);
      const Node& n = t_[id];
      switch (n.kind) {
        case FormulaKind::True: break;
        case FormulaKind::False: return;
        case FormulaKind::Atom:
          if (b.exp.neg & n.bit) return;
          b.exp.pos |= n.bit;
          break;
        case FormulaKind::Not:
          if (b.exp.pos & n.bit) return;
          b.exp.neg |= n.bit;
          break;
        case FormulaKind::And:
          b.todo.push_back(n.lhs);
          b.todo.push_back(n.rhs);
          break;
        case FormulaKind::Or: {
          Branch alt = b;
          alt.todo.push_back(n.rhs);
          run(std::move(alt), out);
          b.todo.push_back(n.lhs);
          break;
        }
        case FormulaKind::Next: insert_sorted(b.exp.next, n.lhs); break;
        case FormulaKind::Until:
        case FormulaKind::Eventually: {
          // postpone: lhs now (unless F), the eventuality again next step
          Branch alt = b;
          if (n.kind == FormulaKind::Until) alt.todo.push_back(n.lhs);
          insert_sorted(alt.exp.next, id);
          insert_sorted(alt.exp.postponed, id);
          run(std::move(alt), out);
          b.todo.push_back(n.kind == FormulaKind::Until ? n.rhs : n.lhs);
          break;
        }
        case FormulaKind::Release: {
          // a R b = (a & b) | (b & X(a R b))
          Branch alt = b;
          alt.todo.push_back(n.rhs);
          insert_sorted(alt.exp.next, id);
          run(std::move(alt), out);
          b.todo.push_back(n.lhs);
          b.todo.push_back(n.rhs);
          break;
        }
        case FormulaKind::Always:
          b.todo.push_back(n.lhs);
          insert_sorted(b.exp.next, id);
          break;
      }
    }
    out.insert(std::move(b.exp));
  }

  const FormulaTable& t_;
};

}  // namespace

BuchiAutomaton ltl_to_nba(const Formula& nnf_formula, const ApSet& ap, std::size_t state_cap) {
  FormulaTable table(ap);
  FormulaId root = table.intern(nnf_formula);

  // Generalized acceptance: one set per eventuality of the closure.
  std::vector<FormulaId> eventualities;
  for (FormulaId id = 0; id < table.size(); ++id)
    if (table[id].kind == FormulaKind::Until || table[id].kind == FormulaKind::Eventually)
      eventualities.push_back(id);
  const std::size_t k = eventualities.size();

  struct Edge {
    Letter pos, neg;
    std::uint32_t target;
    std::vector<char> marks;  // marks[j]: eventuality j not deferred on this edge
  };
  std::map<FormulaSet, std::uint32_t> state_ids;
  std::vector<FormulaSet> states;
  std::vector<std::vector<Edge>> edges;
  Expander expander(table);

  auto state_of = [&](const FormulaSet& s) {
    auto [it, fresh] = state_ids.emplace(s, static_cast<std::uint32_t>(states.size()));
    if (fresh) {
      if (states.size() >= state_cap)
        throw CapExceeded("tableau exceeded the state cap of " + std::to_string(state_cap));
      states.push_back(s);
      edges.emplace_back();
    }
    return it->second;
  };

  state_of(FormulaSet{root});
  for (std::uint32_t s = 0; s < states.size(); ++s) {
    for (const Expansion& e : expander.expand(states[s])) {
      Edge edge{e.pos, e.neg, state_of(e.next), std::vector<char>(k, 1)};
      for (std::size_t j = 0; j < k; ++j)
        if (std::binary_search(e.postponed.begin(), e.postponed.end(), eventualities[j]))
          edge.marks[j] = 0;
      edges[s].push_back(std::move(edge));
    }
  }

  // Degeneralize: NBA state (s, level), level in [0, k]; level k is accepting and
  // counts as level 0 when leaving.
  const std::size_t levels = k + 1;
  const std::size_t nba_states = states.size() * levels;
  if (nba_states > state_cap)
    throw CapExceeded("degeneralized automaton exceeded the state cap of " +
                      std::to_string(state_cap));
  BuchiAutomaton nba(ap, nba_states);
  auto nba_id = [&](std::uint32_t s, std::size_t level) {
    return static_cast<StateId>(s * levels + level);
  };
  nba.add_initial(nba_id(0, 0));
  for (std::uint32_t s = 0; s < states.size(); ++s) {
    nba.set_accepting(nba_id(s, k), true);
    for (std::size_t level = 0; level < levels; ++level) {
      for (const Edge& e : edges[s]) {
        std::size_t j = level == k ? 0 : level;
        while (j < k && e.marks[j]) ++j;
        for (Letter l = 0; l < ap.letter_count(); ++l)
          if ((l & e.pos) == e.pos && (l & e.neg) == 0)
            nba.add_transition(nba_id(s, level), l, nba_id(e.target, j));
      }
    }
  }
  return nba.trimmed();
}

RabinAutomaton translate(const Formula& f, std::size_t state_cap) {
  return translate(f, ApSet(f.atoms()), state_cap);
}

RabinAutomaton translate(const Formula& f, const ApSet& ap, std::size_t state_cap) {
  return determinize(ltl_to_nba(simplify(to_nnf(f)), ap, state_cap), state_cap);
}

}  // namespace ltlmon
