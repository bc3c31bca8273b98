/* C interface to the iakit interference-alignment library.
 *
 * All functions return iakit_status; on any failure iakit_last_error() gives
 * a thread-local human-readable message. Strings returned through char**
 * outputs are heap-allocated and must be released with iakit_string_free.
 */
#ifndef IAKIT_H
#define IAKIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iakit_status {
    IAKIT_OK = 0,
    IAKIT_EINVAL = 1,    /* bad arguments, bad config, domain violations */
    IAKIT_ENUMERIC = 2,  /* numerical failure (cancellation, singularity) */
    IAKIT_ENONCONV = 3,  /* Monte-Carlo draw budget exhausted */
    IAKIT_EINTERNAL = 4, /* unexpected exception; please report */
} iakit_status;

const char* iakit_version(void);
const char* iakit_last_error(void);
void iakit_string_free(char* s);

/* ---- network dimensions ------------------------------------------------ */

typedef struct iakit_dims iakit_dims;

iakit_status iakit_dims_create(int users, const int* tx_antennas, const int* rx_antennas,
                               const int* streams, const int* rx_streams,
                               iakit_dims** out);
iakit_status iakit_dims_create_symmetric(int users, int tx_antennas, int rx_antennas,
                                         int streams, int rx_streams, iakit_dims** out);
void iakit_dims_destroy(iakit_dims* dims);

/* ---- feasibility -------------------------------------------------------- */

typedef struct iakit_proper_report {
    int proper;
    long long margin;
    long long num_equations;
    long long num_variables;
} iakit_proper_report;

iakit_status iakit_proper_symmetric(int users, int tx_antennas, int rx_antennas,
                                    int streams, int rx_streams,
                                    iakit_proper_report* out);
iakit_status iakit_proper_general(const iakit_dims* dims, iakit_proper_report* out);

typedef struct iakit_dmt_point {
    int streams;    /* d  */
    int rx_streams; /* d' */
    long long margin;
} iakit_dmt_point;

/* Call with out_points == NULL to query the count. */
iakit_status iakit_dmt_enumerate(int users, int tx_antennas, int rx_antennas,
                                 iakit_dmt_point* out_points, int capacity,
                                 int* out_count);

/* ---- alignment solver ---------------------------------------------------- */

typedef struct iakit_solve_report {
    double residual_leakage;
    int iterations;
    int converged;
    int aligned;  /* verify_alignment with default tolerances */
    int ranks_ok;
} iakit_solve_report;

iakit_status iakit_solve(const iakit_dims* dims, unsigned long long channel_seed,
                         unsigned long long solver_seed, int max_iters, double tol,
                         int restarts, iakit_solve_report* out);

/* ---- analytic rates (bits) ---------------------------------------------- */

iakit_status iakit_shin_lee_rate(int streams, int rx_streams, double rho,
                                 double* out_bits);
/* mu: eigenvalues of Phi^{-1} (any order), mult: multiplicities, L entries. */
iakit_status iakit_chiani_csu(int n, int p, const double* mu, const int* mult, int L,
                              double* out_bits);
iakit_status iakit_theorem2_bound(const iakit_dims* dims, const double* powers,
                                  double sigma2, int user, double* out_bits);

/* ---- sweeps -------------------------------------------------------------- */

typedef struct iakit_sweep_spec iakit_sweep_spec;

/* Flat key=value config text; see docs/config.md in the source tree. */
iakit_status iakit_sweep_spec_parse(const char* text, iakit_sweep_spec** out);
iakit_status iakit_sweep_spec_serialize(const iakit_sweep_spec* spec, char** out_text);
void iakit_sweep_spec_destroy(iakit_sweep_spec* spec);

/* Runs the sweep and renders the CSV (metadata lines, header, rows).
 * threads > 1 parallelizes trials without changing any output byte.
 * force skips the properness gate for IA methods. */
iakit_status iakit_sweep_run_csv(const iakit_sweep_spec* spec, int threads, int force,
                                 int with_timestamp, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* IAKIT_H */
