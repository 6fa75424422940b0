/* pipeleak — pipeline leak detection simulator.
 *
 * C interface to the simulation core. All functions return PLK_OK on success
 * or a nonzero error code; plk_last_error() describes the most recent failure
 * on the calling thread. Handles are opaque and freed with their matching
 * *_free function. Distinct handles may be used concurrently from different
 * threads; a single handle must not be shared without external locking.
 */
#ifndef PIPELEAK_H
#define PIPELEAK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PLK_OK 0
#define PLK_ERR_INVALID_ARG 1
#define PLK_ERR_CONFIG 2
#define PLK_ERR_DIVERGED 3
#define PLK_ERR_IO 4
#define PLK_ERR_INTERNAL 5

typedef struct plk_scenario plk_scenario;
typedef struct plk_run plk_run;
typedef struct plk_gain_table plk_gain_table;

const char* plk_version(void);

/* Message for the last error raised on this thread; empty string if none. */
const char* plk_last_error(void);

/* --- scenario configuration ------------------------------------------- */

int plk_scenario_load_file(const char* path, plk_scenario** out);
int plk_scenario_parse(const char* json_text, plk_scenario** out);
int plk_scenario_set_seed(plk_scenario* s, long long seed);
int plk_scenario_set_cells(plk_scenario* s, int n_cells);
/* dotted_key addresses a JSON field, e.g. "adaptation.gamma". */
int plk_scenario_set_param(plk_scenario* s, const char* dotted_key, double value);
/* Configuration warnings, one per line; empty string if none. */
const char* plk_scenario_warnings(const plk_scenario* s);
void plk_scenario_free(plk_scenario* s);

/* --- closed-loop runs --------------------------------------------------- */

int plk_run_scenario(const plk_scenario* s, plk_run** out);
int plk_run_length(const plk_run* r, size_t* out_len);
/* Borrow a column of the sampled time series. Valid names: t, q0, p0, q_l,
 * p_l, y, y_hat, chi_hat, delta_hat. The pointer stays owned by the run. */
int plk_run_column(const plk_run* r, const char* name, const double** out_data,
                   size_t* out_len);
int plk_run_write_timeseries_csv(const plk_run* r, const char* path);
int plk_run_write_metrics_json(const plk_run* r, const char* path);
/* Metrics document as a JSON string owned by the run handle. */
int plk_run_metrics_json(const plk_run* r, const char** out_json);
void plk_run_free(plk_run* r);

/* --- observer gain tables ------------------------------------------------ */

int plk_gain_table_compute(const plk_scenario* s, plk_gain_table** out);
int plk_gain_table_rows(const plk_gain_table* g, size_t* out_rows);
/* Column names: x, p1, p2, p1_scaled, p2_scaled. */
int plk_gain_table_column(const plk_gain_table* g, const char* name,
                          const double** out_data, size_t* out_len);
int plk_gain_table_write_csv(const plk_gain_table* g, const char* path);
void plk_gain_table_free(plk_gain_table* g);

/* --- built-in acceptance suite ------------------------------------------ */

typedef void (*plk_check_callback)(const char* name, int passed, const char* detail,
                                   void* user_data);

/* Runs every built-in check, invoking the callback once per check. Returns
 * PLK_OK even when checks fail; *out_failed carries the failure count. */
int plk_validate(plk_check_callback cb, void* user_data, int* out_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PIPELEAK_H */
