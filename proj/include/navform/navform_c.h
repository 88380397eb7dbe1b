#ifndef NAVFORM_C_H
#define NAVFORM_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nf_scenario nf_scenario;
typedef struct nf_run_result nf_run_result;

typedef enum nf_status {
  NF_OK = 0,
  NF_ERR_IO = 1,
  NF_ERR_PARSE = 2,
  NF_ERR_INVALID = 3,  /* scenario fails validation */
  NF_ERR_MONITOR = 4,  /* run aborted by a monitor */
  NF_ERR_NUMERIC = 5,  /* non-finite state */
  NF_ERR_ARG = 6
} nf_status;

typedef enum nf_violation_policy { NF_FLAG_AND_CONTINUE = 0, NF_ABORT = 1 } nf_violation_policy;

/* Message for the last failing call on this thread. Never NULL. */
const char* nf_last_error(void);

nf_status nf_scenario_load_file(const char* path, nf_scenario** out);
nf_status nf_scenario_load_string(const char* yaml, nf_scenario** out);
nf_status nf_scenario_clone(const nf_scenario* s, nf_scenario** out);
void nf_scenario_free(nf_scenario* s);

const char* nf_scenario_name(const nf_scenario* s);
size_t nf_scenario_agent_count(const nf_scenario* s);

/* Runs validation and caches the violation list on the handle. */
size_t nf_scenario_validate(nf_scenario* s);
/* Text of violation `index` from the last nf_scenario_validate call, or NULL. */
const char* nf_scenario_violation(const nf_scenario* s, size_t index);

/* name: k, Gamma, R_s, delta_1, delta_2, p_fail, tau, T, dt, t_final.
   Setting p_fail, tau or T switches the failure model to random mode. */
nf_status nf_scenario_set_param(nf_scenario* s, const char* name, double value);
nf_status nf_scenario_set_seed(nf_scenario* s, uint64_t seed);
/* agent is 1-based. */
nf_status nf_scenario_set_position(nf_scenario* s, size_t agent, double x, double y);

/* Refuses scenarios that fail validation. The result is produced for NF_OK
   and NF_ERR_MONITOR; *out is NULL otherwise. */
nf_status nf_run(const nf_scenario* s, nf_violation_policy policy, nf_run_result** out);
void nf_run_result_free(nf_run_result* r);

int nf_result_passed(const nf_run_result* r);
int nf_result_aborted(const nf_run_result* r);
int nf_result_coverage(const nf_run_result* r);
size_t nf_result_steps(const nf_run_result* r);
size_t nf_result_switch_count(const nf_run_result* r);
double nf_result_final_residual(const nf_run_result* r);
double nf_result_V(const nf_run_result* r, size_t step);
double nf_result_final_time(const nf_run_result* r);
/* Earliest logged time after which the max formation residual stays <= tol;
   negative if it never settles. */
double nf_result_settling_time(const nf_run_result* r, double tol);
/* agent is 1-based. */
nf_status nf_result_position(const nf_run_result* r, size_t step, size_t agent, double* x, double* y);
/* Monitor names joined by ',' for those that failed; empty when all passed. */
const char* nf_result_failed_monitors(const nf_run_result* r);
const char* nf_result_summary(const nf_run_result* r);

/* Writes trajectory.csv and summary.txt into dir, plus trajectory.svg and
   distances.svg when plots != 0. Creates dir if needed. */
nf_status nf_result_write(const nf_run_result* r, const char* dir, size_t decimation, int plots);

/* suite: all, gradients, properties, bounds. *report is heap-allocated; release
   it with nf_string_free. *ok is 1 when no counterexample was found. */
nf_status nf_verify(const char* suite, uint64_t seed, size_t trials, char** report, int* ok);
void nf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
