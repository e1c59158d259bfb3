#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlmon/alphabet.hpp"
#include "ltlmon/formula.hpp"
#include "ltlmon/lasso.hpp"

namespace ltlmon {

using StateId = std::uint32_t;

inline constexpr std::size_t kDefaultStateCap = 100000;

/// Thrown when a construction would exceed its configured state budget.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for malformed automaton or chain files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State-based Buchi automaton with letters expanded explicitly over 2^AP.
class BuchiAutomaton {
 public:
  BuchiAutomaton(ApSet ap, std::size_t num_states);

  const ApSet& ap() const { return ap_; }
  std::size_t num_states() const { return accepting_.size(); }
  std::size_t letter_count() const { return ap_.letter_count(); }

  const std::vector<StateId>& initial() const { return initial_; }
  bool accepting(StateId s) const { return accepting_.at(s) != 0; }
  const std::vector<StateId>& successors(StateId s, Letter l) const {
    return succ_.at(s * letter_count() + l);
  }

  void add_initial(StateId s);
  void set_accepting(StateId s, bool acc = true);
  void add_transition(StateId from, Letter l, StateId to);

  /// Drops states that are unreachable or cannot reach an accepting cycle.
  BuchiAutomaton trimmed() const;

 private:
  ApSet ap_;
  std::vector<StateId> initial_;
  std::vector<char> accepting_;
  std::vector<std::vector<StateId>> succ_;
};

/// A Rabin pair: accept if `inf` states are visited infinitely often and `fin` states
/// only finitely often.
struct RabinPair {
  std::vector<char> inf;  // F
  std::vector<char> fin;  // G
  friend bool operator==(const RabinPair&, const RabinPair&) = default;
};

/// Complete deterministic Rabin automaton over 2^AP with state-based acceptance.
class RabinAutomaton {
 public:
  RabinAutomaton(ApSet ap, std::size_t num_states, StateId initial);

  const ApSet& ap() const { return ap_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t letter_count() const { return ap_.letter_count(); }
  StateId initial() const { return initial_; }
  StateId next(StateId q, Letter l) const { return delta_[q * letter_count() + l]; }
  const std::vector<RabinPair>& pairs() const { return pairs_; }

  void set_transition(StateId q, Letter l, StateId to) { delta_.at(q * letter_count() + l) = to; }
  /// Adds a pair; `inf`/`fin` list member states.
  void add_pair(const std::vector<StateId>& inf, const std::vector<StateId>& fin);
  void add_pair(RabinPair p);

  /// Throws std::logic_error when a transition target or pair vector is out of range.
  void check() const;

  friend bool operator==(const RabinAutomaton&, const RabinAutomaton&) = default;

 private:
  ApSet ap_;
  std::size_t num_states_;
  StateId initial_;
  std::vector<StateId> delta_;
  std::vector<RabinPair> pairs_;
};

enum class StateClass { Empty, Universal, Other };

const char* to_string(StateClass c);

/// Tableau translation of an NNF formula into a Buchi automaton over `ap`.
/// Until obligations become generalized acceptance sets which are then degeneralized
/// with a level counter. Atoms of f must belong to ap.
BuchiAutomaton ltl_to_nba(const Formula& nnf_formula, const ApSet& ap,
                          std::size_t state_cap = kDefaultStateCap);

/// Safra's construction. Pair i corresponds to tree node name i: `inf` = trees where i is
/// marked, `fin` = trees where i is absent. Pairs whose `inf` is empty are dropped.
RabinAutomaton determinize(const BuchiAutomaton& nba, std::size_t state_cap = kDefaultStateCap);

/// Parses, normalizes and translates, using the formula's atoms (sorted) unless `ap` is given.
RabinAutomaton translate(const Formula& f, std::size_t state_cap = kDefaultStateCap);
RabinAutomaton translate(const Formula& f, const ApSet& ap, std::size_t state_cap = kDefaultStateCap);

bool accepts_lasso(const RabinAutomaton& a, const LassoWord& w);
bool accepts_lasso_from(const RabinAutomaton& a, StateId start, const LassoWord& w);
/// Buchi acceptance of a lasso (test support for the tableau stage).
bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w);

std::vector<StateClass> classify_states(const RabinAutomaton& a);

/// HOA v1 subset. Acceptance is a disjunction of Fin(x)&Inf(y) terms (or bare Inf(y));
/// each term becomes one Rabin pair with G = set x and F = set y. Transition-based marks
/// are moved onto states by splitting; missing edges go to an added rejecting sink.
RabinAutomaton parse_hoa(std::string_view text);
/// Prints with the convention set 2i = G_i (Fin), set 2i+1 = F_i (Inf).
std::string print_hoa(const RabinAutomaton& a, std::string_view name = {});

}  // namespace ltlmon
