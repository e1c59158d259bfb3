/* C interface of the ltlmon shared library.
 *
 * Every fallible call returns an ltlmon_status; on failure ltlmon_last_error()
 * describes the problem (thread-local, valid until the next call on the thread).
 * Strings returned through char** are owned by the caller and released with
 * ltlmon_string_free. Handles are released with their *_free function.
 */
#ifndef LTLMON_H
#define LTLMON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LTLMON_API __declspec(dllexport)
#else
#define LTLMON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltlmon_status {
  LTLMON_OK = 0,
  LTLMON_ERR_USAGE = 1,  /* invalid argument or operation */
  LTLMON_ERR_FORMAT = 2, /* malformed formula, HOA text, chain file or state name */
  LTLMON_ERR_CAP = 3,    /* automaton state cap exceeded */
  LTLMON_ERR_INTERNAL = 4
} ltlmon_status;

typedef enum ltlmon_verdict {
  LTLMON_VERDICT_FALSE = 0,
  LTLMON_VERDICT_TRUE = 1,
  LTLMON_VERDICT_UNKNOWN = 2
} ltlmon_verdict;

/* gamma = (1/(1-p_min))^m; log_gamma is +inf when infinite is set. vacuous marks an
 * infinite value caused only by an Unknown verdict. */
typedef struct ltlmon_confidence {
  uint64_t m;
  double log_gamma;
  int infinite;
  int vacuous;
} ltlmon_confidence;

typedef struct ltlmon_dra ltlmon_dra;
typedef struct ltlmon_chain ltlmon_chain;
typedef struct ltlmon_monitor ltlmon_monitor;
typedef struct ltlmon_online ltlmon_online;

LTLMON_API const char* ltlmon_last_error(void);
LTLMON_API const char* ltlmon_version(void);
LTLMON_API void ltlmon_string_free(char* s);

/* ---- automata ---- */

/* state_cap = 0 selects the default cap. */
LTLMON_API ltlmon_status ltlmon_dra_from_formula(const char* formula, size_t state_cap, ltlmon_dra** out);
LTLMON_API ltlmon_status ltlmon_dra_from_hoa(const char* text, ltlmon_dra** out);
LTLMON_API void ltlmon_dra_free(ltlmon_dra* dra);
LTLMON_API size_t ltlmon_dra_num_states(const ltlmon_dra* dra);
LTLMON_API ltlmon_status ltlmon_dra_to_hoa(const ltlmon_dra* dra, const char* name, char** out);
/* One line per state: "<state>\t<empty|universal|other>". */
LTLMON_API ltlmon_status ltlmon_dra_classify(const ltlmon_dra* dra, char** out);

/* ---- Markov chains ---- */

LTLMON_API ltlmon_status ltlmon_chain_parse(const char* text, ltlmon_chain** out);

/* Probabilities are decimal or num/den strings; NULL selects the default. */
typedef struct ltlmon_family_params {
  size_t l;
  size_t r_len;
  size_t m;
  size_t n;
  const char* p;
  const char* q;
  const char* s;
} ltlmon_family_params;

/* Fills the defaults l=4, r_len=6, m=4, n=10, p=0.5, q=0.45, s=0.08. */
LTLMON_API void ltlmon_family_defaults(ltlmon_family_params* fp);
LTLMON_API ltlmon_status ltlmon_chain_family(const ltlmon_family_params* fp, ltlmon_chain** out);
LTLMON_API void ltlmon_chain_free(ltlmon_chain* c);
LTLMON_API size_t ltlmon_chain_num_states(const ltlmon_chain* c);
/* NULL when out of range; owned by the chain. */
LTLMON_API const char* ltlmon_chain_state_name(const ltlmon_chain* c, uint32_t state);
LTLMON_API ltlmon_status ltlmon_chain_find_state(const ltlmon_chain* c, const char* name, uint32_t* out);
LTLMON_API ltlmon_status ltlmon_chain_print(const ltlmon_chain* c, char** out);
/* LTLMON_ERR_FORMAT when invalid; *diagnostics (may be NULL) then lists the problems.
 * p_min may be NULL. */
LTLMON_API ltlmon_status ltlmon_chain_validate(const ltlmon_chain* c, const char* p_min, char** diagnostics);
/* Smallest positive transition probability as a fraction and a double. */
LTLMON_API ltlmon_status ltlmon_chain_min_probability(const ltlmon_chain* c, char** fraction, double* value);

/* Return nonzero to stop early. */
typedef int (*ltlmon_state_sink)(uint32_t state, void* user);
LTLMON_API ltlmon_status ltlmon_simulate(const ltlmon_chain* c, uint64_t seed, uint64_t steps,
                                         ltlmon_state_sink sink, void* user);

/* ---- product and exact solve ---- */

/* Product chain file; Rabin pair membership is written as labels rabin_inf_<i>/rabin_fin_<i>. */
LTLMON_API ltlmon_status ltlmon_product(const ltlmon_dra* dra, const ltlmon_chain* c, char** out);
/* Acceptance probability of a product chain file read with ltlmon_chain_parse. */
LTLMON_API ltlmon_status ltlmon_solve_product(const ltlmon_chain* product, char** fraction, double* value);
LTLMON_API ltlmon_status ltlmon_solve(const ltlmon_dra* dra, const ltlmon_chain* c, char** fraction,
                                      double* value);

/* ---- monitors ---- */

/* States are indices of `labels`; the chain supplies each state's AP label and name.
 * With record = 0 the induced chain is unavailable but memory stays bounded by the
 * number of distinct product states. */
LTLMON_API ltlmon_status ltlmon_monitor_new(const ltlmon_dra* dra, const ltlmon_chain* labels, double p_min,
                                            int record, ltlmon_monitor** out);
LTLMON_API void ltlmon_monitor_free(ltlmon_monitor* m);
LTLMON_API ltlmon_status ltlmon_monitor_observe(ltlmon_monitor* m, uint32_t state);
LTLMON_API ltlmon_verdict ltlmon_monitor_verdict(const ltlmon_monitor* m);
LTLMON_API void ltlmon_monitor_confidence(const ltlmon_monitor* m, ltlmon_confidence* out);
LTLMON_API int ltlmon_monitor_closed(const ltlmon_monitor* m);
/* The induced chain of a closed trace as a chain file. */
LTLMON_API ltlmon_status ltlmon_monitor_induced_chain(const ltlmon_monitor* m, char** out);

LTLMON_API ltlmon_status ltlmon_online_new(const ltlmon_dra* dra, const ltlmon_chain* labels, double p_min,
                                           ltlmon_online** out);
LTLMON_API void ltlmon_online_free(ltlmon_online* m);
LTLMON_API ltlmon_status ltlmon_online_observe(ltlmon_online* m, uint32_t state);
LTLMON_API ltlmon_verdict ltlmon_online_verdict(const ltlmon_online* m);
LTLMON_API void ltlmon_online_confidence(const ltlmon_online* m, ltlmon_confidence* out);
LTLMON_API size_t ltlmon_online_scc_size(const ltlmon_online* m);

/* ---- experiments and checks ---- */

typedef struct ltlmon_experiment_config {
  ltlmon_family_params family;
  const size_t* ns;
  size_t num_ns;
  const uint64_t* quotas;
  size_t num_quotas;
  const uint64_t* seeds;
  size_t num_seeds;
  size_t runs;
  double threshold;
  double p_min; /* <= 0 selects the family's minimum transition probability */
} ltlmon_experiment_config;

/* CSV with header method,n,quota,seed,estimate,runs_used,steps_used. */
LTLMON_API ltlmon_status ltlmon_experiment(const ltlmon_experiment_config* cfg, char** csv);

/* Translates the formula and compares DRA lasso acceptance with the lasso evaluator on
 * `samples` random words. The report lists the counts and a few disagreeing words. */
LTLMON_API ltlmon_status ltlmon_oracle_check(const char* formula, size_t samples, uint64_t seed,
                                             size_t max_prefix, size_t max_cycle, size_t* disagreements,
                                             char** report);

#ifdef __cplusplus
}
#endif

#endif /* LTLMON_H */
