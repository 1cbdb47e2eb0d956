#ifndef POWERPATH_H
#define POWERPATH_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PpStatus {
  PP_STATUS_OK = 0,
  PP_STATUS_NULL_POINTER = 1,
  PP_STATUS_INVALID_VERTEX = 2,
  PP_STATUS_SELF_LOOP = 3,
  PP_STATUS_INVALID_PARAMETER = 4,
  PP_STATUS_PARSE = 5,
  PP_STATUS_CAPACITY = 6,
  PP_STATUS_UNSUPPORTED = 7,
  // A step precondition or local-optimality assertion failed.
  PP_STATUS_PRECONDITION = 8,
  PP_STATUS_NOT_FOUND = 9,
  PP_STATUS_INTERNAL = 10,
} PpStatus;

typedef enum PpModel {
  PP_MODEL_RANDOM = 0,
  PP_MODEL_TRANSITIVE = 1,
  PP_MODEL_C3CHAIN = 2,
  PP_MODEL_IMPLICIT_RANDOM = 3,
} PpModel;

typedef enum PpMode {
  PP_MODE_PLAIN = 0,
  PP_MODE_BLOCK_TRANSITIVE = 1,
} PpMode;

// Opaque tournament handle.
typedef struct PpTournament PpTournament;

// Opaque witness handle.
typedef struct PpWitness PpWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on this thread.
const char *pp_last_error(void);

// Generate a tournament. `seed` is ignored by the deterministic models.
enum PpStatus pp_tournament_generate(enum PpModel model,
                                     size_t n,
                                     uint64_t seed,
                                     struct PpTournament **out);

// Parse NUL-terminated PTv1 text.
enum PpStatus pp_tournament_parse(const char *text, struct PpTournament **out);

// PTv1 text of an explicit tournament; release it with `pp_string_free`.
enum PpStatus pp_tournament_serialize(const struct PpTournament *t, char **out);

void pp_string_free(char *s);

void pp_tournament_free(struct PpTournament *t);

// Vertex count; 0 for a null handle.
size_t pp_tournament_n(const struct PpTournament *t);

// `*out = true` iff `u -> v`.
enum PpStatus pp_tournament_orient(const struct PpTournament *t, size_t u, size_t v, bool *out);

enum PpStatus pp_embed_hamilton(const struct PpTournament *t, struct PpWitness **out);

// Square of a path on at least ceil(2n/3) vertices.
enum PpStatus pp_embed_square(const struct PpTournament *t, struct PpWitness **out);

// Block-transitive `k`-th power of a path. Zero for `block_size`, `a_star` or
// `blocks` selects the default; `guaranteed` requires all three zero.
enum PpStatus pp_embed_power(const struct PpTournament *t,
                             size_t k,
                             size_t block_size,
                             size_t a_star,
                             size_t blocks,
                             bool guaranteed,
                             struct PpWitness **out);

// Exact longest `k`-th power of a path (small tournaments only).
enum PpStatus pp_longest_power_path(const struct PpTournament *t, size_t k, struct PpWitness **out);

void pp_witness_free(struct PpWitness *w);

// Vertex count; 0 for a null handle.
size_t pp_witness_len(const struct PpWitness *w);

size_t pp_witness_k(const struct PpWitness *w);

enum PpMode pp_witness_mode(const struct PpWitness *w);

// `pp_witness_len(w)` vertex ids, valid while `w` lives; null for null.
const size_t *pp_witness_vertices(const struct PpWitness *w);

// `*out = true` iff `vertices[0..len]` spans a `k`-th power of a path.
enum PpStatus pp_verify(const struct PpTournament *t,
                        const size_t *vertices,
                        size_t len,
                        size_t k,
                        enum PpMode mode,
                        bool *out);

// Exhaustive l_k(n): minimum over all n-vertex tournaments of the longest
// `k`-th power of a path.
enum PpStatus pp_ell_exact(size_t n, size_t k, bool long_run, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POWERPATH_H */
