#include "ltlmon/ltlmon.h"

#include <cstring>
#include <sstream>

#include "ltlmon/automata.hpp"
#include "ltlmon/experiments.hpp"
#include "ltlmon/formula.hpp"
#include "ltlmon/markov.hpp"
#include "ltlmon/monitor.hpp"
#include "ltlmon/oracle.hpp"

using namespace ltlmon;

struct ltlmon_dra {
  std::shared_ptr<const MonitorAutomaton> automaton;
};

struct ltlmon_chain {
  std::shared_ptr<const MarkovChain> chain;
};

struct ltlmon_monitor {
  Monitor monitor;
  std::shared_ptr<const MarkovChain> labels;
  std::vector<Letter> letters;
};

struct ltlmon_online {
  OnlineMonitor monitor;
  std::vector<Letter> letters;
};

namespace {

thread_local std::string last_error;

ltlmon_status fail(ltlmon_status st, const std::string& msg) {
  last_error = msg;
  return st;
}

template <class F>
ltlmon_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const CapExceeded& e) {
    return fail(LTLMON_ERR_CAP, e.what());
  } catch (const FormatError& e) {
    return fail(LTLMON_ERR_FORMAT, e.what());
  } catch (const ParseError& e) {
    return fail(LTLMON_ERR_FORMAT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LTLMON_ERR_USAGE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(LTLMON_ERR_USAGE, e.what());
  } catch (const std::exception& e) {
    return fail(LTLMON_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LTLMON_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be NULL");
}

ltlmon_verdict to_c(Verdict v) {
  switch (v) {
    case Verdict::True: return LTLMON_VERDICT_TRUE;
    case Verdict::False: return LTLMON_VERDICT_FALSE;
    case Verdict::Unknown: break;
  }
  return LTLMON_VERDICT_UNKNOWN;
}

void to_c(const Confidence& c, ltlmon_confidence* out) {
  out->m = c.m;
  out->log_gamma = c.log_gamma;
  out->infinite = c.infinite;
  out->vacuous = c.vacuous;
}

std::vector<Letter> letters_of(const RabinAutomaton& a, const MarkovChain& c) {
  std::vector<Letter> out(c.size());
  for (StateId s = 0; s < c.size(); ++s) out[s] = a.ap().letter_of(c.props(s));
  return out;
}

FamilyParams family_of(const ltlmon_family_params& fp) {
  FamilyParams out;
  out.l = fp.l;
  out.r_len = fp.r_len;
  out.m = fp.m;
  out.n = fp.n;
  try {
    if (fp.p) out.p = parse_probability(fp.p);
    if (fp.q) out.q = parse_probability(fp.q);
    if (fp.s) out.s = parse_probability(fp.s);
  } catch (const FormatError& e) {
    throw std::invalid_argument(e.what());
  }
  return out;
}

void write_solution(const Rational& r, char** fraction, double* value) {
  if (fraction) *fraction = dup(to_string(r));
  if (value) *value = r.convert_to<double>();
}

}  // namespace

extern "C" {

const char* ltlmon_last_error(void) { return last_error.c_str(); }

const char* ltlmon_version(void) { return "1.0.0"; }

void ltlmon_string_free(char* s) { std::free(s); }

ltlmon_status ltlmon_dra_from_formula(const char* formula, size_t state_cap, ltlmon_dra** out) {
  return guarded([&] {
    require(formula, "formula");
    require(out, "out");
    auto dra = translate(parse_ltl(formula), state_cap ? state_cap : kDefaultStateCap);
    *out = new ltlmon_dra{std::make_shared<const MonitorAutomaton>(std::move(dra))};
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_dra_from_hoa(const char* text, ltlmon_dra** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ltlmon_dra{std::make_shared<const MonitorAutomaton>(parse_hoa(text))};
    return LTLMON_OK;
  });
}

void ltlmon_dra_free(ltlmon_dra* dra) { delete dra; }

size_t ltlmon_dra_num_states(const ltlmon_dra* dra) { return dra ? dra->automaton->dra.num_states() : 0; }

ltlmon_status ltlmon_dra_to_hoa(const ltlmon_dra* dra, const char* name, char** out) {
  return guarded([&] {
    require(dra, "dra");
    require(out, "out");
    *out = dup(print_hoa(dra->automaton->dra, name ? name : ""));
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_dra_classify(const ltlmon_dra* dra, char** out) {
  return guarded([&] {
    require(dra, "dra");
    require(out, "out");
    std::ostringstream os;
    const auto& classes = dra->automaton->classes;
    for (std::size_t q = 0; q < classes.size(); ++q) os << q << "\t" << to_string(classes[q]) << "\n";
    *out = dup(os.str());
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_chain_parse(const char* text, ltlmon_chain** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ltlmon_chain{std::make_shared<const MarkovChain>(parse_chain(text))};
    return LTLMON_OK;
  });
}

void ltlmon_family_defaults(ltlmon_family_params* fp) {
  if (!fp) return;
  FamilyParams d;
  fp->l = d.l;
  fp->r_len = d.r_len;
  fp->m = d.m;
  fp->n = d.n;
  fp->p = "0.5";
  fp->q = "0.45";
  fp->s = "0.08";
}

ltlmon_status ltlmon_chain_family(const ltlmon_family_params* fp, ltlmon_chain** out) {
  return guarded([&] {
    require(fp, "params");
    require(out, "out");
    *out = new ltlmon_chain{std::make_shared<const MarkovChain>(build_family(family_of(*fp)))};
    return LTLMON_OK;
  });
}

void ltlmon_chain_free(ltlmon_chain* c) { delete c; }

size_t ltlmon_chain_num_states(const ltlmon_chain* c) { return c ? c->chain->size() : 0; }

const char* ltlmon_chain_state_name(const ltlmon_chain* c, uint32_t state) {
  if (!c || state >= c->chain->size()) return nullptr;
  return c->chain->name(state).c_str();
}

ltlmon_status ltlmon_chain_find_state(const ltlmon_chain* c, const char* name, uint32_t* out) {
  return guarded([&] {
    require(c, "chain");
    require(name, "name");
    require(out, "out");
    auto id = c->chain->find(name);
    if (!id) return fail(LTLMON_ERR_FORMAT, std::string("unknown state '") + name + "'");
    *out = *id;
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_chain_print(const ltlmon_chain* c, char** out) {
  return guarded([&] {
    require(c, "chain");
    require(out, "out");
    *out = dup(print_chain(*c->chain));
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_chain_validate(const ltlmon_chain* c, const char* p_min, char** diagnostics) {
  return guarded([&] {
    require(c, "chain");
    std::optional<Rational> bound;
    if (p_min) {
      try {
        bound = parse_probability(p_min);
      } catch (const FormatError& e) {
        throw std::invalid_argument(e.what());
      }
    }
    auto problems = validate(*c->chain, bound);
    std::string text;
    for (const auto& p : problems) text += p + "\n";
    if (diagnostics) *diagnostics = dup(text);
    if (problems.empty()) return LTLMON_OK;
    return fail(LTLMON_ERR_FORMAT, problems.front());
  });
}

ltlmon_status ltlmon_chain_min_probability(const ltlmon_chain* c, char** fraction, double* value) {
  return guarded([&] {
    require(c, "chain");
    auto p = c->chain->min_probability();
    if (!p) return fail(LTLMON_ERR_USAGE, "chain has no transitions");
    write_solution(*p, fraction, value);
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_simulate(const ltlmon_chain* c, uint64_t seed, uint64_t steps, ltlmon_state_sink sink,
                              void* user) {
  return guarded([&] {
    require(c, "chain");
    require(reinterpret_cast<const void*>(sink), "sink");
    if (steps == 0) return LTLMON_OK;
    Sampler sampler(*c->chain, seed);
    StateId s = sampler.start();
    for (uint64_t i = 0;; ++i) {
      if (sink(s, user)) break;
      if (i + 1 >= steps) break;
      s = sampler.step(s);
    }
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_product(const ltlmon_dra* dra, const ltlmon_chain* c, char** out) {
  return guarded([&] {
    require(dra, "dra");
    require(c, "chain");
    require(out, "out");
    *out = dup(print_product(product(dra->automaton->dra, *c->chain)));
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_solve_product(const ltlmon_chain* pc, char** fraction, double* value) {
  return guarded([&] {
    require(pc, "product");
    write_solution(sat_probability(product_from_chain_file(*pc->chain)), fraction, value);
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_solve(const ltlmon_dra* dra, const ltlmon_chain* c, char** fraction, double* value) {
  return guarded([&] {
    require(dra, "dra");
    require(c, "chain");
    write_solution(sat_probability(product(dra->automaton->dra, *c->chain)), fraction, value);
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_monitor_new(const ltlmon_dra* dra, const ltlmon_chain* labels, double p_min, int record,
                                 ltlmon_monitor** out) {
  return guarded([&] {
    require(dra, "dra");
    require(labels, "labels");
    require(out, "out");
    *out = new ltlmon_monitor{Monitor(dra->automaton, p_min, record != 0), labels->chain,
                              letters_of(dra->automaton->dra, *labels->chain)};
    return LTLMON_OK;
  });
}

void ltlmon_monitor_free(ltlmon_monitor* m) { delete m; }

ltlmon_status ltlmon_monitor_observe(ltlmon_monitor* m, uint32_t state) {
  return guarded([&] {
    require(m, "monitor");
    if (state >= m->letters.size()) return fail(LTLMON_ERR_USAGE, "state index out of range");
    m->monitor.observe(state, m->letters[state]);
    return LTLMON_OK;
  });
}

ltlmon_verdict ltlmon_monitor_verdict(const ltlmon_monitor* m) {
  return m ? to_c(m->monitor.verdict()) : LTLMON_VERDICT_UNKNOWN;
}

void ltlmon_monitor_confidence(const ltlmon_monitor* m, ltlmon_confidence* out) {
  if (m && out) to_c(m->monitor.confidence(), out);
}

int ltlmon_monitor_closed(const ltlmon_monitor* m) { return m && m->monitor.closed(); }

ltlmon_status ltlmon_monitor_induced_chain(const ltlmon_monitor* m, char** out) {
  return guarded([&] {
    require(m, "monitor");
    require(out, "out");
    std::vector<std::string> names;
    for (StateId s = 0; s < m->labels->size(); ++s) names.push_back(m->labels->name(s));
    *out = dup(print_chain(induced_chain(m->monitor, &names).chain));
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_online_new(const ltlmon_dra* dra, const ltlmon_chain* labels, double p_min,
                                ltlmon_online** out) {
  return guarded([&] {
    require(dra, "dra");
    require(labels, "labels");
    require(out, "out");
    *out = new ltlmon_online{OnlineMonitor(dra->automaton, p_min), letters_of(dra->automaton->dra, *labels->chain)};
    return LTLMON_OK;
  });
}

void ltlmon_online_free(ltlmon_online* m) { delete m; }

ltlmon_status ltlmon_online_observe(ltlmon_online* m, uint32_t state) {
  return guarded([&] {
    require(m, "monitor");
    if (state >= m->letters.size()) return fail(LTLMON_ERR_USAGE, "state index out of range");
    m->monitor.observe(state, m->letters[state]);
    return LTLMON_OK;
  });
}

ltlmon_verdict ltlmon_online_verdict(const ltlmon_online* m) {
  return m ? to_c(m->monitor.verdict()) : LTLMON_VERDICT_UNKNOWN;
}

void ltlmon_online_confidence(const ltlmon_online* m, ltlmon_confidence* out) {
  if (m && out) to_c(m->monitor.confidence(), out);
}

size_t ltlmon_online_scc_size(const ltlmon_online* m) { return m ? m->monitor.scc_size() : 0; }

ltlmon_status ltlmon_experiment(const ltlmon_experiment_config* cfg, char** csv) {
  return guarded([&] {
    require(cfg, "config");
    require(csv, "csv");
    if (cfg->num_ns) require(cfg->ns, "ns");
    if (cfg->num_quotas) require(cfg->quotas, "quotas");
    if (cfg->num_seeds) require(cfg->seeds, "seeds");
    if (cfg->runs == 0) return fail(LTLMON_ERR_USAGE, "runs must be positive");
    ExperimentConfig ec;
    ec.family = family_of(cfg->family);
    ec.ns.assign(cfg->ns, cfg->ns + cfg->num_ns);
    ec.quotas.assign(cfg->quotas, cfg->quotas + cfg->num_quotas);
    ec.seeds.assign(cfg->seeds, cfg->seeds + cfg->num_seeds);
    ec.runs = cfg->runs;
    ec.threshold = cfg->threshold;
    if (cfg->p_min > 0) ec.p_min = cfg->p_min;
    for (auto n : ec.ns) {
      FamilyParams fp = ec.family;
      fp.n = n;
      check(fp);
    }
    if (!(ec.threshold >= 1.0)) return fail(LTLMON_ERR_USAGE, "threshold must be at least 1");
    *csv = dup(run_experiment(ec));
    return LTLMON_OK;
  });
}

ltlmon_status ltlmon_oracle_check(const char* formula, size_t samples, uint64_t seed, size_t max_prefix,
                                  size_t max_cycle, size_t* disagreements, char** report) {
  return guarded([&] {
    require(formula, "formula");
    if (max_cycle == 0) return fail(LTLMON_ERR_USAGE, "max_cycle must be positive");
    Formula f = parse_ltl(formula);
    auto dra = translate(f);
    auto rep = oracle_check(f, dra, samples, seed, max_prefix, max_cycle);
    if (disagreements) *disagreements = rep.disagreements;
    if (report) {
      std::ostringstream os;
      os << "formula\t" << f.to_string() << "\n";
      os << "dra_states\t" << dra.num_states() << "\n";
      os << "samples\t" << rep.samples << "\n";
      os << "disagreements\t" << rep.disagreements << "\n";
      for (const auto& w : rep.examples) os << "counterexample\t" << w << "\n";
      *report = dup(os.str());
    }
    return LTLMON_OK;
  });
}

}  // extern "C"
