/* C interface to the Butson-Hadamard toolkit.
 *
 * Matrices over q-th roots of unity are handled through opaque handles in
 * exponent encoding (the integer e stands for the root zeta_q^e).  All
 * arithmetic behind this interface is exact.
 *
 * Every function that can fail returns a bh_status; on failure the out
 * parameters are set to NULL/zero and bh_last_error() holds a thread-local
 * description of the problem.  Objects are released with the matching
 * *_free function; freeing NULL is a no-op.
 */
#ifndef BUTSON_H
#define BUTSON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define BH_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define BH_API __attribute__((visibility("default")))
#else
#  define BH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bh_status {
    BH_OK = 0,
    BH_ERROR_INVALID_ARGUMENT = 1, /* bad dimensions, moduli, indices, nulls */
    BH_ERROR_PARSE = 2,            /* malformed matrix text */
    BH_ERROR_NOT_DIVISIBLE = 3,    /* an X+Y entry is not divisible by s+1 */
    BH_ERROR_NOT_PETRESCU = 4,     /* matrix lacks the repeated-block layout */
    BH_ERROR_OVERFLOW = 5,         /* 64-bit intermediate overflowed */
    BH_ERROR_INTERNAL = 6
} bh_status;

/* Description of the most recent failure on this thread; never NULL. */
BH_API const char* bh_last_error(void);

BH_API const char* bh_version(void);

/* ------------------------------------------------------------------ */
/* Matrices                                                           */
/* ------------------------------------------------------------------ */

typedef struct bh_matrix bh_matrix;

/* entries may be NULL for an all-zero matrix; otherwise it holds
 * n_rows*n_cols values in row-major order, each in [0, q). */
BH_API bh_status bh_matrix_create(uint32_t q, uint32_t n_rows, uint32_t n_cols,
                                  const int32_t* entries, bh_matrix** out);
BH_API void bh_matrix_free(bh_matrix* m);
BH_API bh_status bh_matrix_clone(const bh_matrix* m, bh_matrix** out);

BH_API uint32_t bh_matrix_q(const bh_matrix* m);
BH_API uint32_t bh_matrix_rows(const bh_matrix* m);
BH_API uint32_t bh_matrix_cols(const bh_matrix* m);
BH_API bh_status bh_matrix_get(const bh_matrix* m, uint32_t i, uint32_t j, int32_t* out);
BH_API bh_status bh_matrix_set(bh_matrix* m, uint32_t i, uint32_t j, int32_t e);
BH_API bh_status bh_matrix_equal(const bh_matrix* a, const bh_matrix* b, int* out);

/* Accepts both the grid format (optional "q <q> n <rows> [m <cols>]"
 * header, one row per line) and the structured JSON format.  default_q
 * supplies the modulus for headerless grids; 0 means a header is
 * required. */
BH_API bh_status bh_matrix_parse(const char* text, uint32_t default_q, bh_matrix** out);

typedef enum bh_format { BH_FORMAT_GRID = 0, BH_FORMAT_JSON = 1 } bh_format;

/* The returned string is owned by the caller; release with bh_string_free. */
BH_API bh_status bh_matrix_serialize(const bh_matrix* m, bh_format format, char** out);
BH_API void bh_string_free(char* s);

/* Named builtin matrices; currently "w19", the order-19 matrix over sixth
 * roots of unity in Petrescu block form. */
BH_API bh_status bh_matrix_builtin(const char* name, bh_matrix** out);
/* Fourier matrix of order n: entry (i, k) = i*k mod n, with q = n. */
BH_API bh_status bh_matrix_fourier(uint32_t n, bh_matrix** out);

BH_API bh_status bh_matrix_dephase(const bh_matrix* m, bh_matrix** out);
BH_API bh_status bh_matrix_conj_transpose(const bh_matrix* m, bh_matrix** out);
/* FNV-1a digest of (q, dimensions, entries); stable across platforms. */
BH_API bh_status bh_matrix_checksum(const bh_matrix* m, uint64_t* out);

/* ------------------------------------------------------------------ */
/* Verification                                                       */
/* ------------------------------------------------------------------ */

typedef struct bh_report bh_report;

/* Exact Butson-Hadamard test over every row and column pair.  The call
 * succeeds even when the matrix fails the test; inspect the report. */
BH_API bh_status bh_verify(const bh_matrix* m, bh_report** out);

/* Structural audit of an order-3s+1 matrix in Petrescu block form: both
 * equation systems plus consistency of X + Y with -(1/(s+1)) T D* T*.
 * Fails with BH_ERROR_NOT_PETRESCU when the repeated blocks disagree. */
BH_API bh_status bh_check_blocks(const bh_matrix* m, uint32_t s, bh_report** out);

BH_API int bh_report_passed(const bh_report* r);
BH_API bh_status bh_report_render_text(const bh_report* r, char** out);
BH_API bh_status bh_report_render_json(const bh_report* r, char** out);
BH_API void bh_report_free(bh_report* r);

/* ------------------------------------------------------------------ */
/* Block tools                                                        */
/* ------------------------------------------------------------------ */

/* Exact value of X + Y for given T (s x s+1) and D (s+1 x s+1) blocks,
 * returned as s*s*q reduced coefficients in row-major order (entry (i,j)
 * occupies coefficients [ (i*s+j)*q, (i*s+j+1)*q )).  Release with
 * bh_coeffs_free.  Fails with BH_ERROR_NOT_DIVISIBLE when some entry of
 * T D* T* is not divisible by s+1. */
BH_API bh_status bh_xy_sum(const bh_matrix* t, const bh_matrix* d, uint32_t s,
                           int64_t** out_coeffs, size_t* out_len);
BH_API void bh_coeffs_free(int64_t* coeffs);

/* All unordered exponent pairs {a, b} with zeta^a + zeta^b equal to the
 * value given by `coeffs` (q coefficients, coefficient k multiplying
 * zeta^k).  Pairs are written as 2*count ints (a0, b0, a1, b1, ...) in
 * lexicographic order; release with bh_pairs_free. */
BH_API bh_status bh_decompose_pair_sum(uint32_t q, const int64_t* coeffs, size_t coeffs_len,
                                       int32_t** out_pairs, size_t* out_count);
BH_API void bh_pairs_free(int32_t* pairs);

/* ------------------------------------------------------------------ */
/* Search                                                             */
/* ------------------------------------------------------------------ */

typedef struct bh_search_config {
    uint32_t s;
    uint32_t q;                  /* must be even for bh_search_run */
    uint64_t max_d_candidates;   /* 0 = unlimited */
    uint64_t max_t_candidates;   /* 0 = unlimited */
    uint64_t max_solutions;      /* 0 = all */
    int deterministic_order;     /* nonzero: canonical result order */
    double time_budget_seconds;  /* <= 0 = no budget */
    uint32_t threads;
    int pruning_enabled;
} bh_search_config;

/* Fills in the defaults: s = 6, q = 6, one solution, deterministic,
 * no budget, one thread, pruning on. */
BH_API void bh_search_config_init(bh_search_config* cfg);

typedef struct bh_search_result bh_search_result;

BH_API bh_status bh_search_run(const bh_search_config* cfg, bh_search_result** out);

BH_API size_t bh_search_result_count(const bh_search_result* r);
/* Assembled order-3s+1 solution. */
BH_API bh_status bh_search_result_matrix(const bh_search_result* r, size_t index, bh_matrix** out);
/* One block of a solution; `block` is one of 'X', 'Y', 'T', 'D'. */
BH_API bh_status bh_search_result_block(const bh_search_result* r, size_t index, char block,
                                        bh_matrix** out);
/* Counters and timings as a JSON object (format_version 1). */
BH_API bh_status bh_search_result_stats_json(const bh_search_result* r, char** out);
/* Nonzero when the time budget expired before the space was exhausted. */
BH_API int bh_search_result_truncated(const bh_search_result* r);
BH_API void bh_search_result_free(bh_search_result* r);

/* ------------------------------------------------------------------ */
/* T-block enumeration                                                */
/* ------------------------------------------------------------------ */

typedef struct bh_matrix_list bh_matrix_list;

/* All s x (s+1) T blocks (zero-sum, pairwise-orthogonal rows in canonical
 * order), up to max_candidates (0 = all). */
BH_API bh_status bh_enumerate_t(uint32_t s, uint32_t q, uint64_t max_candidates,
                                bh_matrix_list** out);
BH_API size_t bh_matrix_list_count(const bh_matrix_list* l);
BH_API bh_status bh_matrix_list_get(const bh_matrix_list* l, size_t index, bh_matrix** out);
BH_API void bh_matrix_list_free(bh_matrix_list* l);

#ifdef __cplusplus
}
#endif

#endif /* BUTSON_H */
