/*
 * sparkppr - finite-field linear coding with sparse-repair decoding and
 * spark-optimized code design, plus a Monte Carlo relay-channel simulator.
 *
 * C interface over the C++ core. All objects are opaque handles created and
 * destroyed through this API; every fallible call returns an sppr_status and
 * leaves a diagnostic retrievable with sppr_last_error() on failure.
 */
#ifndef SPARKPPR_H
#define SPARKPPR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPPR_API __declspec(dllexport)
#else
#define SPPR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sppr_status {
  SPPR_OK = 0,
  SPPR_ERR_INVALID_ARG = 1, /* bad parameter or configuration value */
  SPPR_ERR_PARSE = 2,       /* malformed input file */
  SPPR_ERR_IO = 3,          /* missing or unreadable/unwritable file */
  SPPR_ERR_INFEASIBLE = 4,  /* exact-balance design constraint unmet */
  SPPR_ERR_MISSING = 5,     /* required catalog or catalog entry absent */
  SPPR_ERR_VERIFY = 6,      /* catalog failed re-verification */
  SPPR_ERR_INTERNAL = 7
} sppr_status;

typedef struct sppr_matrix sppr_matrix;
typedef struct sppr_catalog sppr_catalog;
typedef struct sppr_sim_result sppr_sim_result;

SPPR_API const char* sppr_version(void);

/* Thread-local message for the most recent failure; empty string if none. */
SPPR_API const char* sppr_last_error(void);

/* ---- matrices (text format: "q rows cols" header, one line per row) ---- */

SPPR_API sppr_status sppr_matrix_parse(const char* text, sppr_matrix** out);
SPPR_API sppr_status sppr_matrix_read_file(const char* path, sppr_matrix** out);
SPPR_API void sppr_matrix_free(sppr_matrix* m);
SPPR_API uint32_t sppr_matrix_rows(const sppr_matrix* m);
SPPR_API uint32_t sppr_matrix_cols(const sppr_matrix* m);
SPPR_API uint32_t sppr_matrix_field(const sppr_matrix* m);
SPPR_API uint32_t sppr_matrix_rank(const sppr_matrix* m);

/*
 * Smallest number of linearly dependent columns. On return, *unbounded is 1
 * (and *spark is 0) when all columns are independent; otherwise *spark holds
 * the value and up to witness_cap 1-based indices of the first dependent
 * column set are stored with their count in *witness_len.
 */
SPPR_API sppr_status sppr_matrix_spark(const sppr_matrix* m, uint32_t* spark,
                                       int* unbounded, uint32_t* witness,
                                       size_t witness_cap, size_t* witness_len);

/* ---- code design catalogs ---- */

/*
 * Searches spark-maximizing combination blocks for every redundancy in
 * 1..eps_max and assembles a catalog. `schemes` is a comma-separated list
 * drawn from "MSLC" and "OSPRLC". `budget` counts spark evaluations per
 * search phase. workers = 0 picks a single worker.
 */
SPPR_API sppr_status sppr_design_search(uint32_t q, uint32_t k, uint32_t eps_max,
                                        const char* schemes, uint64_t budget,
                                        uint64_t seed, uint32_t workers,
                                        sppr_catalog** out);
SPPR_API sppr_status sppr_catalog_save(const sppr_catalog* c, const char* path);
/* Loading re-verifies stored sparks, proportions and set balance. */
SPPR_API sppr_status sppr_catalog_load(const char* path, sppr_catalog** out);
SPPR_API void sppr_catalog_free(sppr_catalog* c);
SPPR_API size_t sppr_catalog_size(const sppr_catalog* c);

typedef struct sppr_catalog_row {
  char scheme[16];
  uint32_t epsilon;
  uint32_t n; /* k + epsilon */
  uint32_t matrix_count;
  uint32_t lowest_spark;
  uint32_t highest_spark;
  double poe_one;               /* proportion of ones, averaged over the entry */
  char poe_one_exact[32];       /* the same proportion as "num/den" */
} sppr_catalog_row;

SPPR_API sppr_status sppr_catalog_row_info(const sppr_catalog* c, size_t idx,
                                           sppr_catalog_row* out);

/* ---- simulation ---- */

/*
 * Runs the experiment described by a flat key=value config file. Seed
 * precedence: the override (when has_seed_override is nonzero) beats the
 * config seed, which beats the fallback (when has_seed_fallback is nonzero);
 * a run with no seed from any source is rejected, nothing draws from an
 * implicit entropy source. workers_override = 0 keeps the config value.
 */
SPPR_API sppr_status sppr_sim_run_file(const char* config_path,
                                       int has_seed_override,
                                       uint64_t seed_override,
                                       int has_seed_fallback,
                                       uint64_t seed_fallback,
                                       uint32_t workers_override,
                                       sppr_sim_result** out);
SPPR_API void sppr_sim_result_free(sppr_sim_result* r);

/* CSV text (header plus one row per scheme/decoder/N); owned by the handle. */
SPPR_API const char* sppr_sim_csv(const sppr_sim_result* r);
/* Human-readable run summary; owned by the handle. */
SPPR_API const char* sppr_sim_summary(const sppr_sim_result* r);
/* Output path named in the config file, or "" when none was set. */
SPPR_API const char* sppr_sim_out_path(const sppr_sim_result* r);
SPPR_API sppr_status sppr_sim_write_csv(const sppr_sim_result* r,
                                        const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPARKPPR_H */
