#ifndef STARSEQ_H
#define STARSEQ_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StarseqMode {
  STARSEQ_MODE_LITERAL = 0,
  STARSEQ_MODE_MONOTONE = 1,
} StarseqMode;

typedef enum StarseqStatus {
  STARSEQ_STATUS_OK = 0,
  STARSEQ_STATUS_NULL_POINTER = 1,
  // Malformed number, zero where a positive value is required, bad budget.
  STARSEQ_STATUS_INVALID_ARGUMENT = 2,
  // The requested term lies past a term the factoring budget could not finish.
  STARSEQ_STATUS_INCOMPLETE = 3,
  // A term would exceed the configured digit bound.
  STARSEQ_STATUS_TOO_LARGE = 4,
  // The mother sequence generator reached its ceiling.
  STARSEQ_STATUS_CEILING_REACHED = 5,
  // A value does not fit the fixed-width output.
  STARSEQ_STATUS_OVERFLOW = 6,
  // A bug; the library caught a panic.
  STARSEQ_STATUS_INTERNAL = 99,
} StarseqStatus;

typedef struct StarseqEmbedding StarseqEmbedding;

typedef struct StarseqGross StarseqGross;

typedef struct StarseqMother StarseqMother;

typedef struct StarseqStream StarseqStream;

// One capture of an embedding.
typedef struct StarseqCapture {
  uint64_t step;
  uint64_t row;
  uint64_t position;
  uint64_t mother_index;
  uint64_t prime;
  uint32_t exponent;
} StarseqCapture;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The caller
// frees it with [`starseq_string_free`].
char *starseq_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void starseq_string_free(char *s);

// `x(x + 1)` as a decimal string.
//
// # Safety
// `x` must be a valid string and `out` valid for a write.
enum StarseqStatus starseq_star(const char *x, char **out);

// Primality of `n`: deterministic below about 3.3e24, 64 random bases above.
//
// # Safety
// `n` must be a valid string and `out` valid for a write.
enum StarseqStatus starseq_is_prime(const char *n, bool *out);

// Gross sequence of `x`, refusing terms above `max_digits` decimal digits
// (0 selects the default).
//
// # Safety
// `x` must be a valid string and `out` valid for a write.
enum StarseqStatus starseq_gross_new(const char *x, uint64_t max_digits, struct StarseqGross **out);

// Term `k` of the gross sequence.
//
// # Safety
// `h` must be a live handle and `out` valid for a write.
enum StarseqStatus starseq_gross_term(struct StarseqGross *h, size_t k, char **out);

// # Safety
// `h` must be null or a handle from [`starseq_gross_new`], not yet freed.
void starseq_gross_free(struct StarseqGross *h);

// Star sequence of `x`. Zero budget fields select the defaults.
//
// # Safety
// `x` must be a valid string and `out` valid for a write.
enum StarseqStatus starseq_stream_new(const char *x,
                                      uint64_t trial_bound,
                                      uint32_t rho_rounds,
                                      uint64_t rho_iterations,
                                      struct StarseqStream **out);

// Term `j` of the star sequence: its prime as a string, the exponent and
// the gross index it came from. Either `gross_index` or `exponent` may be null.
//
// # Safety
// `h` must be a live handle and `prime` valid for a write.
enum StarseqStatus starseq_stream_term(struct StarseqStream *h,
                                       size_t j,
                                       char **prime,
                                       uint32_t *exponent,
                                       size_t *gross_index);

// # Safety
// `h` must be null or a handle from [`starseq_stream_new`], not yet freed.
void starseq_stream_free(struct StarseqStream *h);

// Mother sequence generator over sources up to `ceiling` (0 selects the default).
struct StarseqMother *starseq_mother_new(uint64_t ceiling);

// Term `index`: prime, exponent and the source integer it was factored from.
// `source` may be null.
//
// # Safety
// `h` must be a live handle; `prime` and `exponent` valid for writes.
enum StarseqStatus starseq_mother_term(struct StarseqMother *h,
                                       uint64_t index,
                                       uint64_t *prime,
                                       uint32_t *exponent,
                                       uint64_t *source);

// Writes the first `len` indices at which `prime^exponent` occurs.
//
// # Safety
// `h` must be a live handle and `out` valid for `len` writes.
enum StarseqStatus starseq_mother_occurrences(struct StarseqMother *h,
                                              uint64_t prime,
                                              uint32_t exponent,
                                              uint64_t *out,
                                              size_t len);

// # Safety
// `h` must be null or a handle from [`starseq_mother_new`], not yet freed.
void starseq_mother_free(struct StarseqMother *h);

// Embeds the finite sequence `values[0..len]` (decimal prime powers) for
// `steps` captures. A run cut short by the mother ceiling still succeeds;
// see [`starseq_embedding_truncated`].
//
// # Safety
// `mother` must be a live handle, `values` must hold `len` valid strings and
// `out` must be valid for a write.
enum StarseqStatus starseq_embed(struct StarseqMother *mother,
                                 const char *const *values,
                                 size_t len,
                                 uint64_t steps,
                                 enum StarseqMode mode,
                                 struct StarseqEmbedding **out);

// Number of captures performed.
//
// # Safety
// `h` must be a live handle.
size_t starseq_embedding_len(const struct StarseqEmbedding *h);

// Whether generation stopped before the requested number of steps.
//
// # Safety
// `h` must be a live handle.
bool starseq_embedding_truncated(const struct StarseqEmbedding *h);

// # Safety
// `h` must be a live handle and `out` valid for a write.
enum StarseqStatus starseq_embedding_step(const struct StarseqEmbedding *h,
                                          size_t i,
                                          struct StarseqCapture *out);

// Formal disjointness, numeric agreement with the target, and agreement of
// every captured index with the mother sequence.
//
// # Safety
// `h` must be a live handle; each output must be null or valid for a write.
enum StarseqStatus starseq_embedding_verify(const struct StarseqEmbedding *h,
                                            bool *pfd,
                                            bool *numeric,
                                            bool *matches_mother);

// # Safety
// `h` must be null or a handle from [`starseq_embed`], not yet freed.
void starseq_embedding_free(struct StarseqEmbedding *h);

// Compares `1/x` with `sum_{k<n} 1/(star^k x + 1) + 1/star^n x`. Fractions
// come back as `"num/den"` strings; `lhs` and `rhs` may be null.
//
// # Safety
// `x` must be a valid string; outputs must be null or valid for writes.
enum StarseqStatus starseq_recip_check(const char *x,
                                       size_t n,
                                       bool *equal,
                                       char **lhs,
                                       char **rhs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARSEQ_H */
