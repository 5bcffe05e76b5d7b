/* C interface to the multipath background tracking pipeline.
 *
 * All entry points return MPT_OK (0) on success, MPT_ERR_CONFIG (2) for
 * invalid configuration or arguments, and MPT_ERR_NUMERICAL (3) when a
 * numerical step (factorization, likelihood evaluation) fails. On failure
 * mpt_last_error() returns a thread-local description of the most recent
 * error.
 *
 * Functions with a char** result parameter allocate a NUL-terminated JSON
 * string that the caller releases with mpt_string_free().
 */
#ifndef MPTRACK_H
#define MPTRACK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MPT_OK 0
#define MPT_ERR_CONFIG 2
#define MPT_ERR_NUMERICAL 3

typedef struct mpt_config mpt_config;

const char* mpt_last_error(void);
void mpt_string_free(char* s);

/* Parse a JSON config file (strict: unknown keys are rejected). */
int mpt_config_load(const char* path, mpt_config** out);
int mpt_config_parse(const char* json_text, mpt_config** out);
void mpt_config_free(mpt_config* cfg);

/* Render one background-only trial and write it as a replay CSV to
 * <out_dir>/pings.csv, plus a metadata JSON to <out_dir>/simulate.json. */
int mpt_run_simulate(const mpt_config* cfg, const char* out_dir);

/* Fit the named model ("m0", "mc", "md", "mcd") on the training pings of a
 * simulated trial. *result_json gets the fitted hyperparameters and the
 * marginal log-likelihood. */
int mpt_run_fit(const mpt_config* cfg, const char* model, char** result_json);

/* Wilks significance sweep over scenarios x INR grid with n_mc replicates
 * per cell; writes significance.csv under the configured output_dir and
 * returns per-cell rejection rates. */
int mpt_run_significance(const mpt_config* cfg, const double* inr_grid_db,
                         size_t n_inr, char** result_json);

/* One detection cell: calibrate the SLRT threshold at the configured Pfa,
 * then run n_mc target-present trials at snr_db with the named model. */
int mpt_run_detect(const mpt_config* cfg, const char* model, double snr_db,
                   char** result_json);

/* Full Monte Carlo sweep over the configured models and SNR grid; writes
 * pd_vs_snr.csv, mtd_vs_snr.csv, cdf_delay.csv and SVG plots under
 * output_dir. */
int mpt_run_mc(const mpt_config* cfg, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* MPTRACK_H */
