#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ltlmon/automata.hpp"
#include "ltlmon/graph.hpp"

namespace ltlmon {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "0.45", "3", "7/12" or "1e-3" into an exact rational in [0, inf).
Rational parse_probability(std::string_view text);
std::string to_string(const Rational& r);

struct Transition {
  StateId to;
  Rational p;
  double pd;  // p as double, for likelihoods and sampling
};

/// Finite Markov chain with named states and AP labels.
class MarkovChain {
 public:
  StateId add_state(const std::string& name, std::vector<std::string> props = {});
  /// Adds mass to an existing initial entry or transition.
  void add_initial(StateId s, const Rational& p);
  void add_transition(StateId from, StateId to, const Rational& p);

  std::size_t size() const { return names_.size(); }
  const std::string& name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find(const std::string& name) const;
  const std::vector<std::string>& props(StateId s) const { return props_.at(s); }
  const std::vector<Transition>& row(StateId s) const { return rows_.at(s); }
  const std::vector<std::pair<StateId, Rational>>& initial() const { return initial_; }
  Rational initial_probability(StateId s) const;
  /// Exact P(s, t); zero when absent.
  Rational probability(StateId s, StateId t) const;
  double probability_d(StateId s, StateId t) const;

  /// Every proposition name occurring in a label, sorted.
  std::vector<std::string> ap_names() const;
  /// Smallest positive transition probability (nullopt without transitions).
  std::optional<Rational> min_probability() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<std::vector<std::string>> props_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<std::pair<StateId, Rational>> initial_;
};

/// Line-oriented chain format:
///   state <id> [props <ap> ...]
///   init <id> <prob>
///   trans <src> <dst> <prob>
/// '#' starts a comment. Throws FormatError naming the line.
MarkovChain parse_chain(std::string_view text);
std::string print_chain(const MarkovChain& c);

/// Row sums, initial mass and (optionally) the p_min lower bound. Empty when valid.
std::vector<std::string> validate(const MarkovChain& c,
                                  const std::optional<Rational>& p_min = std::nullopt);

/// Dense bitset over Rabin pair indices.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::size_t n) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
  PairSet& operator|=(const PairSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  /// Some index is in *this but not in `o`.
  bool has_outside(const PairSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return true;
    return false;
  }
  bool empty() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> w_;
};

/// Per-automaton-state pair memberships, precomputed once per DRA.
struct PairMembership {
  std::size_t num_pairs = 0;
  std::vector<PairSet> inf;  // by automaton state
  std::vector<PairSet> fin;

  static PairMembership of(const RabinAutomaton& a);
};

inline constexpr StateId kNoAutomatonState = UINT32_MAX;

/// A chain over (automaton state, system state) pairs together with the Rabin pair
/// membership of every state. States added outside the product construction (for
/// instance an escape sink) carry kNoAutomatonState and belong to no pair.
struct ProductChain {
  MarkovChain chain;
  std::size_t num_pairs = 0;
  std::vector<PairSet> inf;
  std::vector<PairSet> fin;
  std::vector<StateId> automaton_state;
  std::vector<StateId> system_state;

  /// Appends a state and its acceptance data.
  StateId add_state(const std::string& name, StateId q, StateId s, PairSet in_inf, PairSet in_fin);
  /// SCC B is good iff some pair has B meeting F and missing G.
  bool is_good(const std::vector<StateId>& component) const;
};

/// Product restricted to states reachable from the initial support. Product state names
/// are "<system>@<automaton>". Atoms absent from the automaton's AP are ignored.
ProductChain product(const RabinAutomaton& a, const MarkovChain& c);

/// Writes a product as a chain file; pair membership becomes the labels
/// rabin_inf_<i> and rabin_fin_<i>.
std::string print_product(const ProductChain& pc);
/// Reads a chain file whose labels encode pair membership as written by print_product.
ProductChain product_from_chain_file(const MarkovChain& c);

struct SccDecomposition {
  std::vector<std::vector<StateId>> components;  // sources first
  std::vector<std::uint32_t> component_of;
  std::vector<char> bottom;
  std::vector<char> good;  // empty for plain chains
};

Digraph graph_of(const MarkovChain& c);
SccDecomposition scc_decompose(const MarkovChain& c);
SccDecomposition scc_decompose(const ProductChain& pc);

/// Probability of eventually entering a bottom component flagged in `target`, starting
/// from `start` (a distribution). Exact Gaussian elimination on the transient states.
Rational absorption_probability(const MarkovChain& c, const SccDecomposition& d,
                                const std::vector<char>& target,
                                const std::vector<std::pair<StateId, Rational>>& start);

/// Probability that a run of the product is accepted (reaches a good bottom SCC).
Rational sat_probability(const ProductChain& pc);
/// Same, starting deterministically in state s.
Rational sat_probability_from(const ProductChain& pc, StateId s);

/// splitmix64 finalizer; used to derive independent per-run seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Draws successive states of a run. Deterministic for a given seed.
class Sampler {
 public:
  Sampler(const MarkovChain& c, std::uint64_t seed);
  void reseed(std::uint64_t seed) { rng_.seed(seed); }
  StateId start();
  /// Throws std::runtime_error when s has no successors.
  StateId step(StateId s);

 private:
  double uniform();
  StateId draw(const std::vector<double>& cumulative, const std::vector<StateId>& targets);

  const MarkovChain& chain_;
  std::mt19937_64 rng_;
  std::vector<double> init_cum_;
  std::vector<StateId> init_targets_;
  std::vector<std::vector<double>> cum_;
  std::vector<std::vector<StateId>> targets_;
};

/// Exactly max_steps states: the first from mu, the rest from the rows.
std::vector<StateId> sample_run(const MarkovChain& c, std::uint64_t seed, std::size_t max_steps);

}  // namespace ltlmon
