/*
 * tradeshock — shock propagation on weighted directed trade networks.
 *
 * C interface of the shared library. All functions returning ts_status
 * report failures through the return code; when a `char* err` buffer is
 * supplied (may be NULL) it receives a NUL-terminated message. Objects
 * returned through out-parameters are owned by the caller and released with
 * the matching *_free function. Handles are opaque; one handle must not be
 * mutated from two threads at once, but all calls taking const handles are
 * safe to run concurrently.
 */
#ifndef TRADESHOCK_H
#define TRADESHOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TRADESHOCK_API __declspec(dllexport)
#else
#define TRADESHOCK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_ERR_IO = 1,
    TS_ERR_FORMAT = 2,     /* malformed CSV header */
    TS_ERR_ROW = 3,        /* malformed CSV data rows */
    TS_ERR_ARGUMENT = 4,
    TS_ERR_EMPTY_YEAR = 5, /* no records for the requested year */
    TS_ERR_DIMENSION = 6,
    TS_ERR_NONFINITE = 7,
    TS_ERR_DIVERGED = 8,   /* non-finite values during iteration */
    TS_ERR_SINGULAR = 9,   /* equilibrium solve failed */
    TS_ERR_DEGENERATE = 10,/* zero baseline income */
    TS_ERR_EXHAUSTED = 11, /* extinction analysis never crossed the threshold */
    TS_ERR_NOMEM = 12,
    TS_ERR_INTERNAL = 13
} ts_status;

typedef struct ts_dataset ts_dataset;             /* parsed trade records */
typedef struct ts_matrix ts_matrix;               /* one year's import matrix */
typedef struct ts_mea_result ts_mea_result;       /* extinction analysis */
typedef struct ts_perturb_result ts_perturb_result; /* power/vulnerability table */
typedef struct ts_link_scan ts_link_scan;         /* ranked link impacts */

/* Experiment parameters. Always initialize with ts_params_init. */
typedef struct ts_params {
    int iterations;           /* rebalancing steps per shock (default 5) */
    double stop_fraction;     /* extinction stop threshold (default 0.5) */
    double import_scale;      /* perturbation a (default 0.7) */
    double export_scale;      /* perturbation b (default 0.95) */
    double drop_threshold;    /* income-drop fraction counted as damage (default 0.01) */
    double report_threshold;  /* link scans keep losses >= this fraction (default 0.005) */
    int null_trials;          /* trials per null band (default 50) */
    uint64_t seed;            /* base seed for null models (default 0) */
    int threads;              /* worker threads for sweeps (default 1) */
    int null_nonzero_only;    /* permute only nonzero weights (default 0) */
} ts_params;

TRADESHOCK_API void ts_params_init(ts_params* params);

typedef struct ts_band {
    double mean, min, max, q05, q95;
    int trials;    /* requested */
    int successes; /* trials whose statistic evaluated */
} ts_band;

typedef struct ts_fit {
    double coeff[3]; /* intercept first; coeff[2] unused for linear fits */
    int degree;
    double r_squared;
    double p_value;
    int n;
} ts_fit;

TRADESHOCK_API const char* ts_version(void);
TRADESHOCK_API const char* ts_status_name(ts_status status);

/* Stable seed derivation used for per-trial and per-year streams; identical
 * to what the null-band machinery applies internally, so sweeps driven from
 * the outside stay reproducible. */
TRADESHOCK_API uint64_t ts_derive_seed(uint64_t base, uint64_t index);

/* ---- dataset ----------------------------------------------------------- */

TRADESHOCK_API ts_status ts_dataset_open(const char* path, ts_dataset** out, char* err,
                                         size_t err_len);
TRADESHOCK_API ts_status ts_dataset_from_string(const char* text, ts_dataset** out, char* err,
                                                size_t err_len);
TRADESHOCK_API void ts_dataset_free(ts_dataset* dataset);

/* Ingest diagnostics as JSON:
 * {rows_read, rows_dropped_missing, rows_summed_duplicates, years_empty:[...]}.
 * years_empty covers [year_from, year_to]; pass year_from > year_to to use
 * the dataset's own year bounds. Free the string with ts_string_free. */
TRADESHOCK_API ts_status ts_dataset_diagnostics_json(const ts_dataset* dataset, int year_from,
                                                     int year_to, char** json, char* err,
                                                     size_t err_len);
TRADESHOCK_API void ts_string_free(char* text);

TRADESHOCK_API size_t ts_dataset_year_count(const ts_dataset* dataset);
TRADESHOCK_API int ts_dataset_year_at(const ts_dataset* dataset, size_t index);
TRADESHOCK_API ts_status ts_dataset_matrix(const ts_dataset* dataset, int year, ts_matrix** out,
                                           char* err, size_t err_len);

/* ---- matrices ---------------------------------------------------------- */

TRADESHOCK_API void ts_matrix_free(ts_matrix* matrix);
TRADESHOCK_API size_t ts_matrix_size(const ts_matrix* matrix);
TRADESHOCK_API int ts_matrix_year(const ts_matrix* matrix);
/* Valid while the matrix handle lives. */
TRADESHOCK_API const char* ts_matrix_label(const ts_matrix* matrix, size_t i);
TRADESHOCK_API double ts_matrix_value(const ts_matrix* matrix, size_t i, size_t j);
TRADESHOCK_API double ts_matrix_total(const ts_matrix* matrix);

/* Unshocked income vector (out must hold ts_matrix_size entries). */
TRADESHOCK_API ts_status ts_matrix_income(const ts_matrix* matrix, double* out, char* err,
                                          size_t err_len);

TRADESHOCK_API double ts_matrix_connectance(const ts_matrix* matrix);
TRADESHOCK_API void ts_matrix_max_deficit(const ts_matrix* matrix, size_t* node, double* value);
TRADESHOCK_API void ts_matrix_max_surplus(const ts_matrix* matrix, size_t* node, double* value);

/* Degree-preserving randomization (row sums kept exactly). */
TRADESHOCK_API ts_status ts_null_matrix(const ts_matrix* matrix, uint64_t seed,
                                        int nonzero_only, ts_matrix** out, char* err,
                                        size_t err_len);

/* ---- maximal extinction analysis --------------------------------------- */

TRADESHOCK_API ts_status ts_mea_run(const ts_matrix* matrix, const ts_params* params,
                                    ts_mea_result** out, char* err, size_t err_len);
TRADESHOCK_API void ts_mea_free(ts_mea_result* result);
TRADESHOCK_API double ts_mea_robustness(const ts_mea_result* result);
TRADESHOCK_API size_t ts_mea_rounds(const ts_mea_result* result);
TRADESHOCK_API size_t ts_mea_deleted_node(const ts_mea_result* result, size_t round);
TRADESHOCK_API double ts_mea_power(const ts_mea_result* result, size_t round);
TRADESHOCK_API double ts_mea_income_fraction(const ts_mea_result* result, size_t round);

/* ---- node perturbation sweep ------------------------------------------- */

TRADESHOCK_API ts_status ts_perturb_run(const ts_matrix* matrix, const ts_params* params,
                                        ts_perturb_result** out, char* err, size_t err_len);
TRADESHOCK_API void ts_perturb_free(ts_perturb_result* result);
TRADESHOCK_API double ts_perturb_power_pct(const ts_perturb_result* result, size_t node);
TRADESHOCK_API double ts_perturb_vulnerability_pct(const ts_perturb_result* result, size_t node);
TRADESHOCK_API size_t ts_perturb_max_vulnerability_node(const ts_perturb_result* result);

/* ---- link removal ------------------------------------------------------ */

/* Signed percent change of total income after removing the (i, j) link. */
TRADESHOCK_API ts_status ts_link_impact(const ts_matrix* matrix, size_t i, size_t j,
                                        const ts_params* params, double* impact_pct, char* err,
                                        size_t err_len);
TRADESHOCK_API ts_status ts_link_scan_run(const ts_matrix* matrix, const ts_params* params,
                                          ts_link_scan** out, char* err, size_t err_len);
TRADESHOCK_API void ts_link_scan_free(ts_link_scan* scan);
TRADESHOCK_API size_t ts_link_scan_count(const ts_link_scan* scan);
TRADESHOCK_API void ts_link_scan_row(const ts_link_scan* scan, size_t index, size_t* node_a,
                                     size_t* node_b, double* impact_pct,
                                     double* weighted_impact);

/* ---- null-model significance bands -------------------------------------- */

typedef enum ts_statistic {
    TS_STAT_ROBUSTNESS = 0,
    TS_STAT_MAX_VULNERABILITY = 1
} ts_statistic;

TRADESHOCK_API ts_status ts_null_band(const ts_matrix* matrix, ts_statistic statistic,
                                      const ts_params* params, ts_band* out, char* err,
                                      size_t err_len);

/* ---- regression utilities ----------------------------------------------- */

TRADESHOCK_API ts_status ts_linear_fit(const double* x, const double* y, size_t n, ts_fit* out,
                                       char* err, size_t err_len);
TRADESHOCK_API ts_status ts_quadratic_fit(const double* x, const double* y, size_t n,
                                          ts_fit* out, char* err, size_t err_len);

#ifdef __cplusplus
}
#endif

#endif /* TRADESHOCK_H */
