#include "ltlmon/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ltlmon/formula.hpp"

namespace ltlmon {

void check(const FamilyParams& fp) {
  if (fp.l < 1 || fp.r_len < 1 || fp.m < 1 || fp.n < 1)
    throw std::invalid_argument("family lengths must be at least 1");
  for (const Rational* x : {&fp.p, &fp.q, &fp.s})
    if (*x <= 0 || *x >= 1) throw std::invalid_argument("family probabilities must lie in (0, 1)");
}

Rational family_min_probability(const FamilyParams& fp) {
  Rational best = 1;
  for (const Rational& x : std::initializer_list<Rational>{fp.p, 1 - fp.p, fp.q, 1 - fp.q, fp.s, 1 - fp.s})
    if (x < best) best = x;
  return best;
}

MarkovChain build_family(const FamilyParams& fp) {
  check(fp);
  MarkovChain c;
  const long l = static_cast<long>(fp.l), r = static_cast<long>(fp.r_len);
  auto a = [&](long i) { return static_cast<StateId>(i + l); };
  for (long i = -l; i <= r; ++i) c.add_state("a_" + std::to_string(i));
  const StateId b0 = static_cast<StateId>(c.size());
  for (std::size_t i = 0; i <= fp.n; ++i)
    c.add_state("b_" + std::to_string(i), i == 0 ? std::vector<std::string>{"acc"} : std::vector<std::string>{});
  const StateId c0 = static_cast<StateId>(c.size());
  for (std::size_t i = 0; i <= fp.m; ++i)
    c.add_state("c_" + std::to_string(i), i < fp.m ? std::vector<std::string>{"acc"} : std::vector<std::string>{});

  for (long i = -l; i <= r; ++i) {
    c.add_transition(a(i), i < r ? a(i + 1) : c0, 1 - fp.p);
    c.add_transition(a(i), i > -l ? a(i - 1) : b0, fp.p);
  }
  for (std::size_t i = 0; i <= fp.n; ++i) {
    StateId b = b0 + static_cast<StateId>(i);
    c.add_transition(b, i < fp.n ? b + 1 : b, fp.q);
    c.add_transition(b, i > 0 ? b - 1 : b, 1 - fp.q);
  }
  for (std::size_t i = 0; i < fp.m; ++i) {
    StateId ci = c0 + static_cast<StateId>(i);
    c.add_transition(ci, ci + 1, fp.s);
    c.add_transition(ci, c0, 1 - fp.s);
  }
  c.add_transition(c0 + static_cast<StateId>(fp.m), c0 + static_cast<StateId>(fp.m), 1);
  c.add_initial(a(0), 1);
  return c;
}

EstimationTarget::EstimationTarget(MarkovChain chain, RabinAutomaton dra)
    : chain_(std::move(chain)), automaton_(std::make_shared<const MonitorAutomaton>(std::move(dra))) {
  letters_.resize(chain_.size());
  for (StateId s = 0; s < chain_.size(); ++s) letters_[s] = automaton_->dra.ap().letter_of(chain_.props(s));
}

const char* to_string(Method m) {
  return m == Method::FixedLength ? "fixed_length" : "confidence_based";
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
  return mix_seed(mix_seed(seed) + run);
}

EstimatorReport fixed_length_estimate(const EstimationTarget& t, std::size_t runs,
                                      std::uint64_t quota, std::uint64_t seed) {
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  EstimatorReport rep;
  rep.method = Method::FixedLength;
  rep.quota = quota;
  rep.seed = seed;
  const std::uint64_t len = quota / runs;
  Sampler sampler(t.chain(), 0);
  for (std::size_t i = 0; i < runs; ++i) {
    sampler.reseed(run_seed(seed, i));
    Monitor mon(t.automaton(), 1.0, false);
    StateId s = 0;
    for (std::uint64_t k = 0; k < len; ++k) {
      s = k == 0 ? sampler.start() : sampler.step(s);
      mon.observe(s, t.letter(s));
    }
    if (mon.verdict() == Verdict::True) ++rep.accepted;
    rep.steps_used += len;
  }
  rep.runs_used = runs;
  rep.estimate = static_cast<double>(rep.accepted) / static_cast<double>(runs);
  return rep;
}

EstimatorReport confidence_based_estimate(const EstimationTarget& t, std::size_t runs,
                                          std::uint64_t quota, double threshold, double p_min,
                                          std::uint64_t seed, std::uint64_t max_run_steps) {
  if (!(threshold >= 1.0)) throw std::invalid_argument("threshold must be at least 1");
  EstimatorReport rep;
  rep.method = Method::ConfidenceBased;
  rep.quota = quota;
  rep.seed = seed;
  const double need = std::log(threshold);
  Sampler sampler(t.chain(), 0);
  for (std::size_t i = 0; i < runs && rep.steps_used < quota; ++i) {
    sampler.reseed(run_seed(seed, i));
    Monitor mon(t.automaton(), p_min, false);
    StateId s = sampler.start();
    mon.observe(s, t.letter(s));
    bool done = false;
    while (true) {
      Verdict v = mon.verdict();
      if (v != Verdict::Unknown) {
        Confidence c = mon.confidence();
        if ((c.infinite && !c.vacuous) || c.log_gamma >= need) {
          done = true;
          if (v == Verdict::True) ++rep.accepted;
          break;
        }
      }
      if (mon.length() >= max_run_steps) break;
      s = sampler.step(s);
      mon.observe(s, t.letter(s));
    }
    rep.steps_used += mon.length();
    if (done) ++rep.runs_used;
    else ++rep.capped_runs;
  }
  rep.exhausted = rep.runs_used == 0;
  rep.estimate = rep.runs_used ? static_cast<double>(rep.accepted) / static_cast<double>(rep.runs_used) : 0.0;
  return rep;
}

std::string csv_row(const EstimatorReport& r, std::size_t n) {
  char est[32];
  std::snprintf(est, sizeof est, "%.6f", r.estimate);
  std::ostringstream os;
  os << to_string(r.method) << ',' << n << ',' << r.quota << ',' << r.seed << ',' << est << ','
     << r.runs_used << ',' << r.steps_used;
  return os.str();
}

std::string run_experiment(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  if (cfg.quotas.empty() || cfg.seeds.empty()) return os.str();
  auto dra = translate(parse_ltl(kFamilyFormula));
  for (std::size_t n : cfg.ns) {
    FamilyParams fp = cfg.family;
    fp.n = n;
    EstimationTarget target(build_family(fp), dra);
    double p_min = cfg.p_min ? *cfg.p_min : family_min_probability(fp).convert_to<double>();
    for (auto quota : cfg.quotas)
      for (auto seed : cfg.seeds) {
        os << csv_row(fixed_length_estimate(target, cfg.runs, quota, seed), n) << "\n";
        os << csv_row(confidence_based_estimate(target, cfg.runs, quota, cfg.threshold, p_min, seed), n)
           << "\n";
      }
  }
  return os.str();
}

}  // namespace ltlmon
