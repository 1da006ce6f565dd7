/* C interface to the tailblocks library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return TB_OK on success; on failure they return an error code and
 * leave a human-readable message in tb_last_error() (thread local). Strings
 * returned through char** are heap allocated and must be released with
 * tb_string_free().
 */
#ifndef TAILBLOCKS_H
#define TAILBLOCKS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
  TB_OK = 0,
  TB_ERR_INVALID_ARGUMENT = 1,
  TB_ERR_INVALID_SCHEME = 2,
  TB_ERR_DIMENSION = 3,
  TB_ERR_DEGENERATE_THRESHOLD = 4,
  TB_ERR_INSUFFICIENT_SAMPLE = 5,
  TB_ERR_UNSUPPORTED = 6,
  TB_ERR_PARSE = 7,
  TB_ERR_IO = 8,
  TB_ERR_INTERNAL = 9
} tb_status;

typedef struct tb_series tb_series;
typedef struct tb_model tb_model;

const char* tb_version(void);
const char* tb_status_name(tb_status status);
/* message from the most recent failing call on this thread */
const char* tb_last_error(void);
void tb_string_free(char* s);

/* ---- series ------------------------------------------------------------ */

/* data is row-major, n points of dim coordinates; norm_kind is one of
 * "euclidean", "sup", "l1" (NULL means euclidean) */
tb_status tb_series_create(const double* data, size_t n, size_t dim, const char* norm_kind,
                           tb_series** out);
tb_status tb_series_read_csv(const char* path, const char* norm_kind, tb_series** out);
tb_status tb_series_write_csv(const tb_series* series, const char* path);
void tb_series_destroy(tb_series* series);

size_t tb_series_length(const tb_series* series);
size_t tb_series_dim(const tb_series* series);
/* copies the cached norms into out (length tb_series_length) */
tb_status tb_series_norms(const tb_series* series, double* out);
/* threshold = the (n-k)-th smallest norm, i.e. the k-th from the top */
tb_status tb_series_order_statistic(const tb_series* series, size_t k, double* out);

/* ---- simulation --------------------------------------------------------- */

/* process grammar: iid:alpha=1 | ar1:rho=0.5,alpha=1 | ma1:b=0.7,alpha=1.5 */
tb_status tb_simulate(const char* process, size_t n, uint64_t seed, tb_series** out);

/* ---- estimators ---------------------------------------------------------- */

/* functional grammar: exc | extremal | cluster-size:m=3 | stop-loss:eta=1.5 |
 * large-dev | ruin.  mode: "sliding" | "disjoint".  The result is a JSON
 * object with value, functional, scheme, threshold, mode and the observed
 * exceedance count. */
tb_status tb_estimate(const tb_series* series, const char* functional, size_t r_n, size_t k,
                      const char* mode, char** json_out);
/* known threshold c and tail probability p */
tb_status tb_estimate_pseudo(const tb_series* series, const char* functional, size_t r_n,
                             double c, double p, char** json_out);
/* known threshold c, empirical exceedance normalization */
tb_status tb_estimate_quasi(const tb_series* series, const char* functional, size_t r_n, double c,
                            char** json_out);

/* T(s) for each entry of s_grid; t_out must hold n_s doubles */
tb_status tb_tail_empirical_process(const tb_series* series, size_t r_n, size_t k,
                                    const double* s_grid, size_t n_s, double* t_out);

/* ---- condition diagnostics (CSV tables) ---------------------------------- */

tb_status tb_diagnose_dh(const tb_series* series, double c, double x, double y, size_t r_n,
                         const size_t* k_grid, size_t n_k, char** csv_out);
tb_status tb_diagnose_s(const tb_series* series, double c, double s, double t, size_t r_n,
                        const size_t* m_grid, size_t n_m, char** csv_out);
tb_status tb_diagnose_ansjb(const tb_series* series, double c, double eta, size_t r_n,
                            const double* epsilon_grid, size_t n_eps, char** csv_out);

/* ---- tail-process oracle -------------------------------------------------- */

/* model grammar: iid:alpha=1 | ar1:rho=0.5,alpha=1 | ma1:b=0.7,alpha=1.5 */
tb_status tb_model_create(const char* grammar, tb_model** out);
void tb_model_destroy(tb_model* model);

/* JSON report: theta, exceedance-probability sum, cluster-size law, cluster
 * indices and limiting variances for the standard functionals, and the
 * identity checks */
tb_status tb_oracle_report(const tb_model* model, uint64_t samples, uint64_t seed,
                           char** json_out);

/* ---- experiment harness --------------------------------------------------- */

/* runs the replication study described by a flat key=value config file and
 * returns the JSON report; also writes the report when the config names an
 * output file.  workers = 0 defers to TAILBLOCKS_WORKERS, then the hardware. */
tb_status tb_experiment_run(const char* config_path, unsigned workers, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* TAILBLOCKS_H */
