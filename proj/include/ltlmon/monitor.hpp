#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlmon/automata.hpp"
#include "ltlmon/markov.hpp"

namespace ltlmon {

enum class Verdict { True, False, Unknown };

/// "true", "false" or "?".
const char* to_string(Verdict v);

/// gamma = (1/(1-p_min))^m, kept in log form.
struct Confidence {
  std::uint64_t m = 0;
  double log_gamma = 0.0;
  bool infinite = false;
  bool vacuous = false;  // infinite only because the verdict is Unknown
};

/// ln(1/(1-p_min)); +inf for p_min = 1.
double log_gamma_per_visit(double p_min);
Confidence make_confidence(std::uint64_t m, double p_min);
/// Exact (1/(1-p_min))^m. Requires p_min < 1.
Rational gamma_exact(std::uint64_t m, const Rational& p_min);

/// Pairs (automaton state, system state) packed as q << 32 | s.
struct ProductKey {
  StateId q;
  StateId s;
};

/// The DRA plus everything the monitors precompute from it.
struct MonitorAutomaton {
  explicit MonitorAutomaton(RabinAutomaton a);

  RabinAutomaton dra;
  std::vector<StateClass> classes;
  PairMembership pairs;
};

/// Full-memory monitor over the trace of product states.
class Monitor {
 public:
  /// With record = false the transition multiset and the trace are not stored;
  /// verdict and confidence stay available.
  Monitor(std::shared_ptr<const MonitorAutomaton> automaton, double p_min, bool record = true);

  /// Appends system state s whose label is `letter`.
  void observe(StateId s, Letter letter);

  std::size_t length() const { return length_; }
  bool closed() const { return closed_; }
  Verdict verdict() const;
  Confidence confidence() const;

  StateId current() const { return current_; }
  std::size_t num_states() const { return keys_.size(); }
  const ProductKey& key(StateId r) const { return keys_.at(r); }
  /// #(r): occurrences of r in r_0..r_{n-1}.
  std::uint64_t exits(StateId r) const { return exits_.at(r); }
  /// T(r, r'); requires record = true.
  std::uint64_t transitions(StateId r, StateId r2) const;
  /// Product ids r_0..r_n; requires record = true.
  const std::vector<StateId>& trace() const { return trace_; }
  std::size_t num_components() const { return frames_.size(); }
  /// Members of the last (bottom) SCC of the trace graph, sorted.
  std::vector<StateId> bottom_component() const;
  /// Component order as sets of product ids, earliest first.
  std::vector<std::vector<StateId>> components() const;

  const MonitorAutomaton& automaton() const { return *automaton_; }
  double p_min() const { return p_min_; }
  bool recording() const { return record_; }

 private:
  struct Frame {
    StateId root;
    std::vector<StateId> members;
    PairSet inf;
    PairSet fin;
    std::uint64_t min_exit;
    std::uint32_t at_min;
  };

  StateId find(StateId r);
  void merge_from(std::size_t pos);
  void bump_exit(StateId r);

  std::shared_ptr<const MonitorAutomaton> automaton_;
  double p_min_;
  bool record_;

  std::size_t length_ = 0;
  StateId q_ = 0;
  Letter last_letter_ = 0;
  StateId current_ = 0;
  bool closed_ = false;

  std::unordered_map<std::uint64_t, StateId> ids_;
  std::vector<ProductKey> keys_;
  std::vector<std::uint64_t> exits_;
  std::vector<StateId> parent_;
  std::vector<std::uint32_t> frame_pos_;
  std::vector<Frame> frames_;

  std::unordered_map<std::uint64_t, std::uint64_t> transitions_;
  std::vector<StateId> trace_;
};

/// M_pi over the monitor's product ids: P(r,r') = T(r,r')/#(r), mu(r_0) = 1. Requires a
/// closed trace and record = true. State names are "<system>@<q>", taking system names
/// from `system_names` when given.
ProductChain induced_chain(const Monitor& m, const std::vector<std::string>* system_names = nullptr);

/// ln(mu(r_0) * prod P(r_{i-1}, r_i)); -inf when a factor is zero.
double likelihood(const MarkovChain& c, const std::vector<StateId>& trace);

/// Moves mass c from r's row to a fresh absorbing state outside every Rabin pair.
/// Requires c in (0,1) and r in a bottom SCC of pc.
ProductChain escape_chain(const ProductChain& pc, StateId r, const Rational& c);

/// P(accept | Cone(trace)) computed from the last trace state. Throws when the trace
/// has zero likelihood.
Rational verdict_probability(const ProductChain& pc, const std::vector<StateId>& trace);

/// Bounded-memory monitor keeping a suffix of the SCC sequence of the trace.
class OnlineMonitor {
 public:
  OnlineMonitor(std::shared_ptr<const MonitorAutomaton> automaton, double p_min);

  void observe(StateId s, Letter letter);

  std::size_t length() const { return length_; }
  bool closed() const;
  Verdict verdict() const;
  Confidence confidence() const;

  /// Total number of states held in the SCC sequence.
  std::size_t scc_size() const { return total_; }
  std::size_t bound() const { return bound_; }
  std::size_t num_sccs() const { return frames_.size(); }
  /// vi of product state (q, s); 0 when not held.
  std::uint64_t visits(ProductKey k) const;
  /// The SCC sequence, earliest first.
  std::vector<std::vector<ProductKey>> sccs() const;
  ProductKey current() const;

 private:
  struct Entry {
    std::uint64_t vi;
    std::uint32_t node;
  };
  struct Frame {
    std::uint32_t root;
    std::vector<std::uint64_t> members;
    PairSet inf;
    PairSet fin;
    std::uint64_t min_visit;
    std::uint32_t at_min;
  };

  std::uint32_t find(std::uint32_t node);
  Frame& frame_of(std::uint32_t node);
  void insert(std::uint64_t key, StateId q);
  void merge_from(std::size_t pos);

  std::shared_ptr<const MonitorAutomaton> automaton_;
  double p_min_;

  std::size_t length_ = 0;
  StateId q_ = 0;
  Letter last_letter_ = 0;
  std::uint64_t current_ = 0;

  std::unordered_map<std::uint64_t, Entry> entries_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> serial_;  // frame serial of a root node
  std::deque<Frame> frames_;
  std::uint64_t front_serial_ = 0;
  std::size_t total_ = 0;
  std::size_t bound_ = 0;
};

}  // namespace ltlmon
