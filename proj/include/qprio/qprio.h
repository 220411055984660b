/*
 * qprio: strategic upgrades in a two-class M|G|1 priority queue.
 *
 * C interface over the qprio core. Every function returns a qp_status code
 * (QP_OK on success); results come back through out-parameters. Objects are
 * opaque handles released with the matching *_destroy function. After a
 * failure, qp_last_error() holds a message for the calling thread.
 *
 * Functions writing text take (char* out, size_t* out_len): on entry *out_len
 * is the buffer capacity, on return it is the size needed including the
 * terminating NUL. A short buffer yields QP_ERROR_INSUFFICIENT_BUFFER; pass
 * out = NULL, *out_len = 0 to query the size.
 */
#ifndef QPRIO_QPRIO_H
#define QPRIO_QPRIO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  if defined(QPRIO_BUILDING_LIBRARY)
#    define QP_API __declspec(dllexport)
#  else
#    define QP_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define QP_API __attribute__((visibility("default")))
#else
#  define QP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  QP_OK = 0,
  QP_ERROR_INVALID_ARGUMENT = -1,
  QP_ERROR_NO_INTERIOR_SOLUTION = -2,
  QP_ERROR_SIMULATION = -3,
  QP_ERROR_PARSE = -4,
  QP_ERROR_NULL_POINTER = -5,
  QP_ERROR_INVALID_HANDLE = -6,
  QP_ERROR_INSUFFICIENT_BUFFER = -7,
  QP_ERROR_IO = -8,
  QP_ERROR_UNKNOWN = -100
} qp_status;

typedef enum { QP_POLICY_NP = 0, QP_POLICY_PR = 1 } qp_policy;

typedef enum {
  QP_COST_INCREASING = 0,
  QP_COST_CONSTANT = 1,
  QP_COST_DECREASING = 2
} qp_cost_shape_kind;

typedef enum {
  QP_SERVICE_DETERMINISTIC = 0,
  QP_SERVICE_GAMMA = 1,
  QP_SERVICE_EXPONENTIAL = 2,
  QP_SERVICE_HYPEREXPONENTIAL2 = 3
} qp_service_family;

typedef enum {
  QP_EQ_ALL_JOIN = 0,
  QP_EQ_NONE_JOIN = 1,
  QP_EQ_SOME_JOIN = 2,
  QP_EQ_CONTINUUM = 3
} qp_equilibrium_kind;

typedef enum { QP_REVENUE_INCREASING = 0, QP_REVENUE_UNIMODAL = 1 } qp_revenue_shape_kind;

typedef enum {
  QP_SOCIAL_ALL_STATES = 0,
  QP_SOCIAL_BOUNDARIES = 1,
  QP_SOCIAL_INTERIOR = 2
} qp_social_kind;

typedef enum {
  QP_SWEEP_EQUILIBRIUM = 0,
  QP_SWEEP_REVENUE = 1,
  QP_SWEEP_OPTIMUM = 2,
  QP_SWEEP_WELFARE = 3
} qp_sweep_quantity;

typedef enum { QP_DYNAMICS_ANALYTICAL = 0, QP_DYNAMICS_EMPIRICAL = 1 } qp_dynamics_mode;

QP_API const char* qp_version(void);
QP_API const char* qp_status_string(int status);
QP_API const char* qp_last_error(void);

/* ---- model ------------------------------------------------------------ */

typedef struct qp_params_struct* qp_params_t;

/* Rejects lambda <= 0, mu <= 0, rho = lambda/mu outside (0,1), K < 1. */
QP_API int qp_params_create(qp_params_t* out, double lambda, double mu, double K);
QP_API int qp_params_destroy(qp_params_t params);
QP_API int qp_params_get(qp_params_t params, double* lambda, double* mu, double* K, double* rho);

/* E[W_o] - E[W_p] at premium fraction phi. */
QP_API int qp_cost(qp_params_t params, int policy, double phi, double* out);
QP_API int qp_cost_shape(qp_params_t params, int policy, int* out_shape);
QP_API int qp_wait_times(qp_params_t params, int policy, double phi, double* premium,
                         double* ordinary);

/* Family and analytic moments of the service law used by the simulator. */
QP_API int qp_service_moments(double mu, double K, int* family, double* mean,
                              double* second_moment);

/* ---- equilibria ------------------------------------------------------- */

typedef struct qp_equilibria_struct* qp_equilibria_t;

/* Interior root of cost(phi) = fee; QP_ERROR_NO_INTERIOR_SOLUTION if none. */
QP_API int qp_some_join(qp_params_t params, int policy, double fee, double* phi);

QP_API int qp_equilibria_compute(qp_equilibria_t* out, qp_params_t params, int policy, double fee);
QP_API int qp_equilibria_destroy(qp_equilibria_t set);
QP_API int qp_equilibria_count(qp_equilibria_t set, size_t* count);
/* phi is NaN for a continuum. */
QP_API int qp_equilibria_get(qp_equilibria_t set, size_t index, int* kind, double* phi,
                             int* stable);
QP_API int qp_equilibria_to_json(qp_equilibria_t set, char* out, size_t* out_len);

/* ---- revenue ---------------------------------------------------------- */

typedef struct {
  int policy;
  int shape;            /* qp_revenue_shape_kind */
  double threshold_rho; /* NaN unless unimodal */
  double phi_star;
  double fee_star;
  double revenue_star;
  int stable;
} qp_revenue_profile;

typedef struct {
  double revenue_np;
  double revenue_pr;
  double difference;
} qp_policy_comparison;

QP_API int qp_revenue(qp_params_t params, int policy, double phi, double* out);
QP_API int qp_revenue_shape(qp_params_t params, int policy, int* shape, double* threshold_rho);
QP_API int qp_phi_max(qp_params_t params, double* out);
/* margin >= 0 is subtracted from boundary-optimal fees. */
QP_API int qp_max_revenue(qp_params_t params, int policy, double margin, qp_revenue_profile* out);
QP_API int qp_revenue_profile_to_json(const qp_revenue_profile* profile, char* out, size_t* out_len);
QP_API int qp_compare_policies(qp_params_t params, qp_policy_comparison* out);
QP_API int qp_policy_comparison_to_json(const qp_policy_comparison* comparison, char* out,
                                        size_t* out_len);

/* ---- welfare ---------------------------------------------------------- */

typedef struct {
  int policy;
  double phi_revenue;
  double welfare_at_revenue_max;
  int social_kind;   /* qp_social_kind */
  double phi_social; /* NaN unless interior */
  double optimal_welfare;
  double worst_welfare;
} qp_welfare_profile;

QP_API int qp_welfare(qp_params_t params, int policy, double phi, double* out);
QP_API int qp_socially_optimal(qp_params_t params, int policy, int* kind, double* phi);
QP_API int qp_welfare_at_revenue_max(qp_params_t params, int policy, qp_welfare_profile* out);
QP_API int qp_welfare_profile_to_json(const qp_welfare_profile* profile, char* out,
                                      size_t* out_len);

/* ---- simulation ------------------------------------------------------- */

typedef struct qp_sim_config_struct* qp_sim_config_t;
typedef struct qp_sim_result_struct* qp_sim_result_t;
typedef struct qp_validation_struct* qp_validation_t;
typedef struct qp_dynamics_struct* qp_dynamics_t;

/* Warmup defaults to horizon / 10; the fee defaults to cost(phi). */
QP_API int qp_sim_config_create(qp_sim_config_t* out, qp_params_t params, int policy, double phi,
                                uint64_t horizon, unsigned replications, uint64_t seed);
/* Flat JSON document; see the README for the keys. */
QP_API int qp_sim_config_from_json(qp_sim_config_t* out, const char* json);
QP_API int qp_sim_config_destroy(qp_sim_config_t config);
QP_API int qp_sim_config_set_warmup(qp_sim_config_t config, uint64_t warmup);
QP_API int qp_sim_config_set_fee(qp_sim_config_t config, double fee);
QP_API int qp_sim_config_to_json(qp_sim_config_t config, char* out, size_t* out_len);

/* threads = 0 uses QP_THREADS or the hardware concurrency. */
QP_API int qp_simulate(qp_sim_result_t* out, qp_sim_config_t config, unsigned threads);
QP_API int qp_sim_result_destroy(qp_sim_result_t result);
/* Per-class means and 95% half-widths; QP_ERROR_NO_INTERIOR_SOLUTION when a
 * class had no customers. */
QP_API int qp_sim_result_wait(qp_sim_result_t result, int premium, double* mean,
                              double* half_width_95);
QP_API int qp_sim_result_welfare(qp_sim_result_t result, double* mean, double* half_width_95);
QP_API int qp_sim_result_to_json(qp_sim_result_t result, char* out, size_t* out_len);

/* Simulates and checks every quantity against its closed form at 99%. */
QP_API int qp_validate(qp_validation_t* out, qp_sim_config_t config, unsigned threads);
QP_API int qp_validation_destroy(qp_validation_t report);
QP_API int qp_validation_passed(qp_validation_t report, int* passed);
QP_API int qp_validation_check_count(qp_validation_t report, size_t* count);
QP_API int qp_validation_check(qp_validation_t report, size_t index, const char** quantity,
                               double* analytical, double* estimate, double* half_width,
                               int* pass);
QP_API int qp_validation_to_json(qp_validation_t report, char* out, size_t* out_len);

/* Best-response dynamics on the premium fraction. sim_horizon and seed are
 * used only in empirical mode. */
QP_API int qp_dynamics_run(qp_dynamics_t* out, qp_params_t params, int policy, double fee,
                           double phi0, unsigned rounds, double step, int mode,
                           uint64_t sim_horizon, uint64_t seed);
QP_API int qp_dynamics_destroy(qp_dynamics_t trace);
QP_API int qp_dynamics_length(qp_dynamics_t trace, size_t* length);
QP_API int qp_dynamics_phi(qp_dynamics_t trace, size_t round, double* phi);
QP_API int qp_dynamics_result(qp_dynamics_t trace, int* converged, double* limit, int* verdict);
QP_API int qp_dynamics_to_json(qp_dynamics_t trace, char* out, size_t* out_len);

/* ---- sweeps ----------------------------------------------------------- */

typedef struct {
  double K_min, K_max, K_step;
  double rho_min, rho_max, rho_step;
  int policy;
  int quantity; /* qp_sweep_quantity */
  double mu;    /* 0 means 1 */
} qp_sweep_spec;

/* Comma-separated header line (no newline) for a quantity. */
QP_API int qp_sweep_header(int quantity, char* out, size_t* out_len);
QP_API int qp_sweep_to_csv(const qp_sweep_spec* spec, unsigned threads, char* out, size_t* out_len);
/* QP_ERROR_IO when the path cannot be written. */
QP_API int qp_sweep_write_csv(const qp_sweep_spec* spec, unsigned threads, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* QPRIO_QPRIO_H */
