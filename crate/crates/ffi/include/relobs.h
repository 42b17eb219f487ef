#ifndef RELOBS_H
#define RELOBS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call. The error classes follow the command-line
 exit codes: parse errors are 2, model errors 3, numerical failures 4.
 */
typedef enum RelobsStatus {
  RELOBS_STATUS_OK = 0,
  RELOBS_STATUS_NULL_ARGUMENT = 1,
  RELOBS_STATUS_PARSE_ERROR = 2,
  RELOBS_STATUS_MODEL_ERROR = 3,
  RELOBS_STATUS_NUMERICAL_ERROR = 4,
  RELOBS_STATUS_INVALID_UTF8 = 5,
  RELOBS_STATUS_BUFFER_TOO_SMALL = 6,
  RELOBS_STATUS_PANIC = 7,
} RelobsStatus;

/*
 A two- or three-particle model on a periodic grid.
 */
typedef struct RelobsModel RelobsModel;

/*
 A set of point particles in `dim` dimensions.
 */
typedef struct RelobsSystem RelobsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *relobs_version(void);

/*
 Message of the last failed call on this thread, or null. The pointer is
 valid until the next call into the library from the same thread.
 */
const char *relobs_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void relobs_string_free(char *s);

/*
 Parses a system document `{"dim": d, "masses": ["p/q", ...]}`.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RelobsStatus relobs_system_from_json(const char *json, struct RelobsSystem **out);

/*
 # Safety
 `system` must come from [`relobs_system_from_json`] and not have been freed.
 */
void relobs_system_free(struct RelobsSystem *system);

/*
 Classifies an operator expression under translations, boosts and (for
 `dim ≥ 2` when `rotations` is true) rotations. `out_json` may be null;
 otherwise it receives `{"isPhysical", "generators": {name: {invariant,
 residual}}}`.

 # Safety
 Pointers must be valid; `expr` NUL-terminated.
 */
enum RelobsStatus relobs_classify(const struct RelobsSystem *system,
                                  const char *expr,
                                  bool rotations,
                                  bool *out_physical,
                                  char **out_json);

/*
 Rewrites a Hamiltonian in Jacobi coordinates and sets the total momentum
 to zero. The result uses `z'[i]`/`p'[i]` for the internal coordinates.

 # Safety
 Pointers must be valid; `expr` NUL-terminated.
 */
enum RelobsStatus relobs_reduce(const struct RelobsSystem *system,
                                const char *expr,
                                char **out_text);

/*
 Parses a grid model document.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RelobsStatus relobs_model_from_json(const char *json, struct RelobsModel **out);

/*
 # Safety
 `model` must come from [`relobs_model_from_json`] and not have been freed.
 */
void relobs_model_free(struct RelobsModel *model);

/*
 Lowest `count` internal levels (center of mass removed).

 # Safety
 `out` must hold `capacity` doubles; other pointers must be valid.
 */
enum RelobsStatus relobs_spectrum_reduced(const struct RelobsModel *model,
                                          size_t count,
                                          double *out,
                                          size_t capacity,
                                          size_t *out_len);

/*
 Lowest `count` levels of a two-particle model at total-momentum index `sector`.

 # Safety
 `out` must hold `capacity` doubles; other pointers must be valid.
 */
enum RelobsStatus relobs_spectrum_sector(const struct RelobsModel *model,
                                         ptrdiff_t sector,
                                         size_t count,
                                         double *out,
                                         size_t capacity,
                                         size_t *out_len);

/*
 Normal-mode frequencies (ascending) of a harmonic chain document
 `{"masses": [...], "K": [[...]], "asrEnforced": bool}`.

 # Safety
 `json` must be NUL-terminated; `out` must hold `capacity` doubles.
 */
enum RelobsStatus relobs_normal_modes(const char *json,
                                      double *out,
                                      size_t capacity,
                                      size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELOBS_H */
