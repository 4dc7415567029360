/* C interface to the artin library.
 *
 * All objects are opaque handles created by *_build / *_parse / *_run and
 * released with the matching *_free. Every fallible call returns an
 * artin_status; on failure artin_last_error() describes the problem for the
 * calling thread until its next failing call. Strings handed out through
 * char** parameters are owned by the caller and released with
 * artin_string_free.
 */
#ifndef ARTIN_ARTIN_H
#define ARTIN_ARTIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(ARTIN_BUILDING_LIBRARY)
#define ARTIN_API __attribute__((visibility("default")))
#else
#define ARTIN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum artin_status {
  ARTIN_OK = 0,
  ARTIN_E_INVALID_ARGUMENT = 1,
  ARTIN_E_RESOURCE = 2,
  ARTIN_E_NOT_SQUAREFREE = 3,
  ARTIN_E_MODE = 4,
  ARTIN_E_INTEGRITY = 5,
  ARTIN_E_IO = 6,
  ARTIN_E_INTERNAL = 7
} artin_status;

typedef struct artin_sieve artin_sieve;
typedef struct artin_context artin_context;
typedef struct artin_scan artin_scan;

ARTIN_API const char* artin_version(void);
ARTIN_API const char* artin_last_error(void);
ARTIN_API void artin_string_free(char* s);

/* ---- sieve ---- */
ARTIN_API artin_status artin_sieve_build(uint64_t limit, unsigned threads, artin_sieve** out);
ARTIN_API artin_status artin_sieve_load(const char* path, artin_sieve** out);
ARTIN_API artin_status artin_sieve_save(const artin_sieve* sieve, const char* path);
ARTIN_API void artin_sieve_free(artin_sieve* sieve);
ARTIN_API uint64_t artin_sieve_limit(const artin_sieve* sieve);
ARTIN_API artin_status artin_sieve_arith(const artin_sieve* sieve, uint64_t n, int* mu, unsigned* omega,
                                         unsigned* big_omega);
/* out[0..3] = p1, P1, P2 (strict), P2 (with multiplicity) */
ARTIN_API artin_status artin_sieve_extremes(const artin_sieve* sieve, uint64_t n, uint32_t out[4]);
ARTIN_API artin_status artin_prime_count(const artin_sieve* sieve, uint64_t x, uint64_t* out);

/* ---- Galois context ---- */
/* spec: "cyclotomic:K" or "poly:c0,c1,...,1" (lowest degree first) */
ARTIN_API artin_status artin_context_parse(const char* spec, artin_context** out);
ARTIN_API void artin_context_free(artin_context* ctx);
ARTIN_API artin_status artin_context_specifier(const artin_context* ctx, char** out);
ARTIN_API uint64_t artin_context_group_order(const artin_context* ctx);
ARTIN_API size_t artin_context_class_count(const artin_context* ctx);
/* Borrowed pointer, valid while ctx lives. NULL when i is out of range. */
ARTIN_API const char* artin_context_class_label(const artin_context* ctx, size_t i);
ARTIN_API uint64_t artin_context_class_size(const artin_context* ctx, size_t i);
ARTIN_API size_t artin_context_ramified_count(const artin_context* ctx);
ARTIN_API uint32_t artin_context_ramified(const artin_context* ctx, size_t i);
/* Canonical index of a label in any part order. */
ARTIN_API artin_status artin_context_class_index(const artin_context* ctx, const char* label, size_t* out);
/* Density as a reduced fraction "a/b". */
ARTIN_API artin_status artin_class_density(const artin_context* ctx, const char* label, char** out);
/* *ramified = 1 for a ramified prime, else *class_index is set. */
ARTIN_API artin_status artin_classify(const artin_context* ctx, uint64_t p, int* ramified, size_t* class_index);

/* ---- scans ---- */
typedef struct artin_scan_options {
  uint64_t x_max;
  const uint64_t* checkpoints; /* strictly increasing; NULL/0 means {x_max} */
  size_t checkpoint_count;
  int exact;                   /* nonzero: exact rational mode (x_max <= 10^4) */
  unsigned threads;
  uint64_t range_size;
  const char* state_path;      /* NULL: no state file */
  int resume;
  uint64_t stop_after_ranges;  /* 0: run to completion */
} artin_scan_options;

ARTIN_API void artin_scan_options_init(artin_scan_options* opt);
ARTIN_API artin_status artin_scan_run(const artin_context* ctx, const artin_sieve* sieve,
                                      const artin_scan_options* opt, artin_scan** out);
ARTIN_API void artin_scan_free(artin_scan* scan);
ARTIN_API int artin_scan_complete(const artin_scan* scan);
ARTIN_API size_t artin_scan_snapshot_count(const artin_scan* scan);
ARTIN_API uint64_t artin_scan_snapshot_x(const artin_scan* scan, size_t i);
/* bucket: class label, "ramified:<p>" or "total"; kind: e.g. "MuOmegaOverN" */
ARTIN_API artin_status artin_scan_value(const artin_scan* scan, uint64_t x, const char* bucket, const char* kind,
                                        double* out);
ARTIN_API artin_status artin_scan_exact(const artin_scan* scan, uint64_t x, const char* bucket, const char* kind,
                                        char** out);
ARTIN_API artin_status artin_scan_n2_count(const artin_scan* scan, uint64_t x, const char* label, uint64_t* out);
ARTIN_API artin_status artin_scan_repeat_count(const artin_scan* scan, uint64_t x, uint64_t* out);
/* Fails with ARTIN_E_INTEGRITY when the partition does not balance. */
ARTIN_API artin_status artin_scan_audit(const artin_scan* scan, double rel_tol, double* worst);
/* format "csv" or "json"; labels NULL means every class. */
ARTIN_API artin_status artin_scan_report(const artin_scan* scan, const char* format, const char* const* labels,
                                         size_t label_count, int include_aux, char** out);

/* ---- reports and suites ---- */
ARTIN_API artin_status artin_reproduce_table(const artin_sieve* sieve, unsigned threads, int decimals,
                                             const char* format, char** out, int* all_within);

typedef struct artin_verify_options {
  uint64_t nmax;
  unsigned kmax;
  uint64_t seed;
  unsigned weights;
  unsigned threads;
  uint64_t flip_mu_at; /* 0: no fault */
} artin_verify_options;

ARTIN_API void artin_verify_options_init(artin_verify_options* opt);
/* *passed is 0 or 1; *out is the JSON summary with the first counterexample. */
ARTIN_API artin_status artin_verify(const artin_sieve* sieve, const artin_verify_options* opt, char** out,
                                    int* passed);

/* ---- counting functions ---- */
ARTIN_API artin_status artin_dickman_rho(double alpha, double* out);
ARTIN_API artin_status artin_psi_smooth(const artin_sieve* sieve, uint64_t x, uint64_t y, uint64_t* out);
/* out must hold x + 1 entries; out[y] = Psi(x, y). */
ARTIN_API artin_status artin_psi_profile(const artin_sieve* sieve, uint64_t x, uint64_t* out, size_t out_len);
ARTIN_API artin_status artin_count_p2_below(const artin_sieve* sieve, uint64_t x, uint64_t y, uint64_t* out);
ARTIN_API artin_status artin_count_repeated_p1(const artin_sieve* sieve, uint64_t x, uint64_t* out);
ARTIN_API artin_status artin_count_p2_in_class(const artin_context* ctx, const artin_sieve* sieve, const char* label,
                                               uint64_t x, uint64_t* out);
ARTIN_API artin_status artin_sum_mu_in_class(const artin_context* ctx, const artin_sieve* sieve, const char* label,
                                             uint64_t x, int64_t* out);
ARTIN_API artin_status artin_fixed_prime_slice(const artin_sieve* sieve, uint32_t p, uint64_t x, double* out);

#ifdef __cplusplus
}
#endif

#endif
