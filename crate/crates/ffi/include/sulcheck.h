#ifndef SULCHECK_H
#define SULCHECK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SulStatus {
  SUL_STATUS_OK = 0,
  SUL_STATUS_NULL_ARGUMENT = 1,
  SUL_STATUS_INVALID_UTF8 = 2,
  SUL_STATUS_PARSE_ERROR = 3,
  SUL_STATUS_MODEL_ERROR = 4,
  SUL_STATUS_RESOURCE_CAP = 5,
  SUL_STATUS_PANIC = 6,
} SulStatus;

typedef struct SulFormula SulFormula;

// A parsed model file with its optional designated point.
typedef struct SulModel SulModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *sul_last_error(void);

// Parse a model file's text into a new handle stored in `*out`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a valid pointer.
enum SulStatus sul_model_parse(const char *src, struct SulModel **out);

// # Safety
// `m` must be NULL or a handle from [`sul_model_parse`] not yet freed.
void sul_model_free(struct SulModel *m);

// Number of states, or 0 for NULL.
//
// # Safety
// `m` must be NULL or a live model handle.
size_t sul_model_state_count(const struct SulModel *m);

// Size of the model: states, edges and atom occurrences plus the sum of
// all pair costs.
//
// # Safety
// `m` must be a live model handle and `out` a valid pointer.
enum SulStatus sul_model_size(const struct SulModel *m, uint64_t *out);

// Parse a state formula into a new handle stored in `*out`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a valid pointer.
enum SulStatus sul_formula_parse(const char *src, struct SulFormula **out);

// # Safety
// `f` must be NULL or a handle from [`sul_formula_parse`] not yet freed.
void sul_formula_free(struct SulFormula *f);

// The formula in canonical syntax, or NULL for a NULL handle. Free with
// [`sul_string_free`].
//
// # Safety
// `f` must be NULL or a live formula handle.
char *sul_formula_to_string(const struct SulFormula *f);

// The negation normal form, or NULL for a NULL handle. Free with
// [`sul_string_free`].
//
// # Safety
// `f` must be NULL or a live formula handle.
char *sul_formula_nnf(const struct SulFormula *f);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void sul_string_free(char *s);

// Decide the formula at `point` (or the model's own point when NULL) and
// store the verdict in `*out`.
//
// # Safety
// `m` and `f` must be live handles, `point` NULL or a NUL-terminated
// string, and `out` a valid pointer.
enum SulStatus sul_check(const struct SulModel *m,
                         const char *point,
                         const struct SulFormula *f,
                         bool *out);

// Like [`sul_check`] but stores the JSON report (the CLI's `--json`
// schema) in `*out`. Free it with [`sul_string_free`].
//
// # Safety
// As for [`sul_check`]; `out` must be a valid pointer.
enum SulStatus sul_check_json(const struct SulModel *m,
                              const char *point,
                              const struct SulFormula *f,
                              bool witness,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SULCHECK_H */
