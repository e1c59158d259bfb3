#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltlmon/markov.hpp"
#include "ltlmon/monitor.hpp"

namespace ltlmon {

/// Two-BSCC family: a walk a_{-l}..a_{r_len} feeding a b-ladder b_0..b_n (accepting
/// BSCC) or a c-ladder c_0..c_m whose last state is a rejecting sink.
struct FamilyParams {
  std::size_t l = 4;
  std::size_t r_len = 6;
  std::size_t m = 4;
  std::size_t n = 10;
  Rational p{1, 2};
  Rational q{45, 100};
  Rational s{8, 100};
};

/// Throws std::invalid_argument unless lengths are >= 1 and probabilities lie in (0,1).
void check(const FamilyParams& fp);
MarkovChain build_family(const FamilyParams& fp);
/// min(p, 1-p, q, 1-q, s, 1-s).
Rational family_min_probability(const FamilyParams& fp);

inline constexpr const char* kFamilyFormula = "G F acc";

/// A chain and a DRA with per-state letters resolved once.
class EstimationTarget {
 public:
  EstimationTarget(MarkovChain chain, RabinAutomaton dra);

  const MarkovChain& chain() const { return chain_; }
  const std::shared_ptr<const MonitorAutomaton>& automaton() const { return automaton_; }
  Letter letter(StateId s) const { return letters_[s]; }

 private:
  MarkovChain chain_;
  std::shared_ptr<const MonitorAutomaton> automaton_;
  std::vector<Letter> letters_;
};

enum class Method { FixedLength, ConfidenceBased };
const char* to_string(Method m);

struct EstimatorReport {
  Method method = Method::FixedLength;
  std::uint64_t quota = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  std::size_t runs_used = 0;
  std::size_t accepted = 0;
  std::uint64_t steps_used = 0;
  std::size_t capped_runs = 0;  // runs abandoned at max_run_steps
  bool exhausted = false;       // no run completed
};

/// Seed of run i under experiment seed `seed`.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

/// Each of `runs` runs contributes a prefix of quota/runs states; the estimate is the
/// fraction of True verdicts (Unknown counts as not accepted).
EstimatorReport fixed_length_estimate(const EstimationTarget& t, std::size_t runs,
                                      std::uint64_t quota, std::uint64_t seed);

/// Runs are extended until the verdict is known with gamma >= threshold. No run starts
/// once `quota` steps are spent; the run that crosses it is finished and counted.
EstimatorReport confidence_based_estimate(const EstimationTarget& t, std::size_t runs,
                                          std::uint64_t quota, double threshold, double p_min,
                                          std::uint64_t seed,
                                          std::uint64_t max_run_steps = 200'000'000);

struct ExperimentConfig {
  FamilyParams family;
  std::vector<std::size_t> ns{10, 20, 30};
  std::vector<std::uint64_t> quotas;
  std::vector<std::uint64_t> seeds{1};
  std::size_t runs = 100;
  double threshold = 100.0;
  std::optional<double> p_min;  // defaults to family_min_probability
};

inline constexpr const char* kCsvHeader = "method,n,quota,seed,estimate,runs_used,steps_used";

std::string csv_row(const EstimatorReport& r, std::size_t n);
/// Header plus one row per (n, quota, seed, method).
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace ltlmon
