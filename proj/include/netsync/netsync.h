/* netsync C API: bounds for cooperative clock synchronization. */
#ifndef NETSYNC_NETSYNC_H
#define NETSYNC_NETSYNC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NETSYNC_BUILDING_LIBRARY)
#    define NETSYNC_API __declspec(dllexport)
#  else
#    define NETSYNC_API __declspec(dllimport)
#  endif
#else
#  define NETSYNC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ns_status {
  NS_OK = 0,
  NS_ERR_INVALID_ARGUMENT = 1,
  NS_ERR_NOT_SYNCHRONIZABLE = 2, /* singular absolute FIM */
  NS_ERR_SINGULAR = 3,
  NS_ERR_DISCONNECTED = 4,
  NS_ERR_DIVERGED = 5,
  NS_ERR_IO = 6,
  NS_ERR_PARSE = 7,
  NS_ERR_RESOURCE = 8,
  NS_ERR_INTERNAL = 9
} ns_status;

typedef struct ns_topology ns_topology;
typedef struct ns_priors ns_priors;
typedef struct ns_fim ns_fim;
typedef struct ns_config ns_config;

/* gamma = 2 n_rounds / sigma2 */
typedef struct ns_link_model {
  int n_rounds;
  double sigma2;
} ns_link_model;

NETSYNC_API const char* ns_version(void);
NETSYNC_API const char* ns_status_string(ns_status status);
/* Message of the last failed call on this thread ("" if none). */
NETSYNC_API const char* ns_last_error_message(void);
/* Node ids attached to the last failure (unreachable agents, degenerate node). */
NETSYNC_API size_t ns_last_error_nodes(size_t* out, size_t capacity);

/* ---- topology ---------------------------------------------------------- */

NETSYNC_API ns_status ns_topology_create(const double* xy, size_t n_nodes, size_t n_agents, double r_max,
                                         ns_topology** out);
NETSYNC_API ns_status ns_topology_lattice(double side_b, double spacing, double r_max, ns_topology** out);
NETSYNC_API ns_status ns_topology_matched_lattice(double side_b, double intensity, double r_max, ns_topology** out);
NETSYNC_API ns_status ns_topology_stochastic(double side_b, double intensity, double r_max, uint64_t seed,
                                             ns_topology** out);
/* mode "extended" (base = intensity) or "dense" (base = area) */
NETSYNC_API ns_status ns_topology_scaling(const char* mode, size_t n_agents, double base, double r_max, uint64_t seed,
                                          ns_topology** out);
NETSYNC_API ns_status ns_topology_load(const char* path, ns_topology** out);
NETSYNC_API ns_status ns_topology_save(const ns_topology* t, const char* path);
NETSYNC_API void ns_topology_free(ns_topology* t);

NETSYNC_API size_t ns_topology_num_nodes(const ns_topology* t);
NETSYNC_API size_t ns_topology_num_agents(const ns_topology* t);
NETSYNC_API size_t ns_topology_num_edges(const ns_topology* t);
NETSYNC_API ns_status ns_topology_degree(const ns_topology* t, size_t node, size_t* agent_degree,
                                         size_t* reference_degree);
NETSYNC_API ns_status ns_topology_position(const ns_topology* t, size_t node, double* x, double* y);
NETSYNC_API int ns_topology_is_connected(const ns_topology* t);
/* Writes up to `capacity` ids, returns the total count in *count. */
NETSYNC_API ns_status ns_topology_interior_agents(const ns_topology* t, size_t* out, size_t capacity, size_t* count);
NETSYNC_API long ns_gauss_circle_degree(double r_max);

/* ---- priors ------------------------------------------------------------ */

NETSYNC_API ns_status ns_priors_from_xi(const double* xi_p, size_t n_agents, ns_priors** out);
NETSYNC_API ns_status ns_priors_uniform(const ns_topology* t, double n_p, ns_link_model link, ns_priors** out);
NETSYNC_API ns_status ns_priors_bernoulli(const ns_topology* t, double p_a, double n_p, uint64_t seed,
                                          ns_link_model link, ns_priors** out);
NETSYNC_API ns_status ns_priors_region(const ns_topology* t, double x0, double y0, double x1, double y1, double n_p,
                                       ns_link_model link, ns_priors** out);
NETSYNC_API size_t ns_priors_size(const ns_priors* p);
NETSYNC_API ns_status ns_priors_xi(const ns_priors* p, double* out, size_t n);
NETSYNC_API void ns_priors_free(ns_priors* p);

/* ---- information matrices ---------------------------------------------- */

typedef enum ns_fim_variant { NS_FIM_ABSOLUTE = 0, NS_FIM_RELATIVE = 1, NS_FIM_EXTENDED = 2 } ns_fim_variant;

/* priors may be NULL for NS_FIM_RELATIVE; xi_inf <= 0 picks the default. */
NETSYNC_API ns_status ns_fim_build(const ns_topology* t, const ns_priors* priors, ns_link_model link,
                                   ns_fim_variant variant, double xi_inf, ns_fim** out);
NETSYNC_API ns_status ns_fim_apply_skew(const ns_fim* f, const double* alphas, size_t n, ns_fim** out);
NETSYNC_API size_t ns_fim_dim(const ns_fim* f);
/* Row-major dense copy into out[dim * dim]. */
NETSYNC_API ns_status ns_fim_dense(const ns_fim* f, double* out, size_t capacity);
/* format "dense" or "triplet" */
NETSYNC_API ns_status ns_fim_save(const ns_fim* f, const char* path, const char* format);
/* Row-major dense transition matrix and absorbing flags. */
NETSYNC_API ns_status ns_fim_transition(const ns_fim* f, double* out, size_t capacity, int* absorbing, size_t n);
NETSYNC_API void ns_fim_free(ns_fim* f);

/* ---- bounds ------------------------------------------------------------ */

NETSYNC_API ns_status ns_aseb_direct(const ns_fim* absolute, double* out, size_t n);
NETSYNC_API ns_status ns_aseb_via_cdi(const ns_topology* t, const ns_priors* priors, ns_link_model link, double* out,
                                      size_t n);

typedef enum ns_rseb_method {
  NS_RSEB_PSEUDO = 0,
  NS_RSEB_Z = 1,
  NS_RSEB_RELATIVE_CDI = 2,
  NS_RSEB_RELATIVE_CDI_PRINTED = 3, /* numerator 1 + rel_cdi */
  NS_RSEB_GROUNDED = 4
} ns_rseb_method;

NETSYNC_API ns_status ns_rseb(const ns_topology* t, ns_link_model link, ns_rseb_method method, double* trace,
                              double* rseb);

typedef struct ns_bounds_summary {
  int has_rseb;
  double rseb;
  double rseb_trace;
  double aseb_max_deviation;
  double rseb_max_deviation;
  double condition_number;
  char methods[128];
} ns_bounds_summary;

NETSYNC_API ns_status ns_bounds_compute(const ns_topology* t, const ns_priors* priors, ns_link_model link,
                                        double* aseb, size_t n, ns_bounds_summary* summary);
NETSYNC_API ns_status ns_node_equivalence(const ns_topology* t, const ns_priors* priors, ns_link_model link,
                                          size_t agent, double xi_inf, double* max_rel_deviation);
/* alpha ~ uniform(lo, hi) with mean 1; ratio = E[diag(B J^-1 B)] / diag(J^-1). */
NETSYNC_API ns_status ns_skew_expectation(const ns_fim* absolute, double lo, double hi, size_t trials, uint64_t seed,
                                          double* ratio, double* ratio_stderr, size_t n);

/* ---- cooperative dilution intensity ------------------------------------ */

NETSYNC_API ns_status ns_cdi_exact(const ns_topology* t, const ns_priors* priors, ns_link_model link, double* out,
                                   size_t n);
NETSYNC_API ns_status ns_cdi_series(const ns_topology* t, const ns_priors* priors, ns_link_model link, double tol,
                                    double* out, size_t n, size_t* terms, double* tail_bound);
NETSYNC_API ns_status ns_rel_cdi(const ns_topology* t, ns_link_model link, double* out, size_t n);

typedef struct ns_walk_result {
  double value;
  double std_error;
  double tail_bound;
  size_t max_steps;
  size_t truncated_walks;
} ns_walk_result;

NETSYNC_API ns_status ns_cdi_walk(const ns_topology* t, const ns_priors* priors, ns_link_model link, size_t agent,
                                  size_t n_walks, size_t max_steps, uint64_t seed, unsigned jobs, ns_walk_result* out);

NETSYNC_API ns_status ns_lattice_return_probability(int n, double r_max, double* out);

typedef struct ns_lattice_cdi {
  double value;
  double exact_part;
  double tail;
  double sigma_r2;
  double q;
  size_t truncation_n;
  size_t degree;
} ns_lattice_cdi;

NETSYNC_API ns_status ns_lattice_cdi_numerical(double r_max, double n_p, double rel_err_tol, size_t max_steps,
                                               ns_lattice_cdi* out);
/* simplified != 0 selects (2/dbar) ln(1 + dbar/N_p) */
NETSYNC_API ns_status ns_lattice_cdi_asymptotic(double r_max, double n_p, int simplified, double* out);
NETSYNC_API ns_status ns_finite_lattice_cdi(double side_b, double r_max, double n_p, double* interior_mean,
                                            double* overall_mean);
NETSYNC_API ns_status ns_expected_cdi_stochastic(double side_b, double intensity, double r_max, double n_p,
                                                 size_t snapshots, uint64_t seed, unsigned jobs, double* mean,
                                                 double* std_error, size_t* resamples);
NETSYNC_API ns_status ns_matched_lattice_cdi(double side_b, double intensity, double r_max, double n_p, double* out);

/* ---- simulation -------------------------------------------------------- */

typedef struct ns_tightness_summary {
  size_t trials;
  int has_relative;
  double trace_pinv;
  double relative_mse;
  double relative_mse_stderr;
} ns_tightness_summary;

/* Per-agent arrays have n entries; errors (nullable) receives trials x n
   row-major estimation errors. */
NETSYNC_API ns_status ns_simulate(const ns_topology* t, const ns_priors* priors, ns_link_model link, size_t trials,
                                  uint64_t seed, unsigned jobs, double* mse, double* mse_stderr, double* aseb,
                                  size_t n, double* errors, ns_tightness_summary* summary);

/* ---- configuration and experiments ------------------------------------- */

NETSYNC_API ns_status ns_config_load(const char* path, ns_config** out);
NETSYNC_API ns_status ns_config_parse(const char* text, ns_config** out);
NETSYNC_API void ns_config_free(ns_config* c);
NETSYNC_API int ns_config_has(const ns_config* c, const char* section, const char* key);
NETSYNC_API ns_status ns_config_set(ns_config* c, const char* section, const char* key, const char* value);
NETSYNC_API ns_status ns_config_get_double(const ns_config* c, const char* section, const char* key, double fallback,
                                           double* out);
NETSYNC_API ns_status ns_config_get_int(const ns_config* c, const char* section, const char* key, int64_t fallback,
                                        int64_t* out);
/* Copies at most capacity - 1 bytes; *needed receives the full length + 1. */
NETSYNC_API ns_status ns_config_get_string(const ns_config* c, const char* section, const char* key,
                                           const char* fallback, char* out, size_t capacity, size_t* needed);
/* Writes up to capacity values; *count receives the list length. */
NETSYNC_API ns_status ns_config_get_doubles(const ns_config* c, const char* section, const char* key, double* out,
                                            size_t capacity, size_t* count);

NETSYNC_API size_t ns_experiment_count(void);
NETSYNC_API const char* ns_experiment_id(size_t index);

typedef struct ns_run_report {
  size_t cells_total;
  size_t cells_resumed;
  size_t cells_computed;
  double wall_seconds;
} ns_run_report;

NETSYNC_API ns_status ns_experiment_run(const char* id, const ns_config* config, uint64_t seed, const char* out_dir,
                                        unsigned jobs, ns_run_report* report);

#ifdef __cplusplus
}
#endif

#endif
