#ifndef KEXPR_H
#define KEXPR_H

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum KexprStatus {
  KEXPR_STATUS_OK = 0,
  // A required pointer argument was null.
  KEXPR_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  KEXPR_STATUS_INVALID_UTF8 = 2,
  // Bad configuration or argument value.
  KEXPR_STATUS_CONFIG = 3,
  // Bad data or unparseable expression.
  KEXPR_STATUS_DATA = 4,
  // I/O or other runtime failure.
  KEXPR_STATUS_RUNTIME = 5,
  // Index out of range.
  KEXPR_STATUS_OUT_OF_RANGE = 6,
  // The library panicked; the call had no effect.
  KEXPR_STATUS_PANIC = 7,
} KexprStatus;

// Opaque run configuration handle.
typedef struct KexprConfig KexprConfig;

// Opaque dataset handle.
typedef struct KexprDataset KexprDataset;

// Opaque parsed expression handle.
typedef struct KexprExpr KexprExpr;

// Opaque handle to a finished run.
typedef struct KexprRun KexprRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *kexpr_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void kexpr_string_free(char *s);

// Generates a synthetic dataset: `problem` is `"tp1"`, `"tp2"` or `"dew"`.
//
// # Safety
// `problem` must be a NUL-terminated string; `out_dataset` a valid pointer.
enum KexprStatus kexpr_dataset_synth(const char *problem,
                                     size_t rows,
                                     uint64_t seed,
                                     struct KexprDataset **out_dataset);

// Loads a CSV dataset. `target` may be null for the last column.
//
// # Safety
// `path` and a non-null `target` must be NUL-terminated strings.
enum KexprStatus kexpr_dataset_from_csv(const char *path,
                                        const char *target,
                                        struct KexprDataset **out_dataset);

// Number of rows.
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_dataset_rows(const struct KexprDataset *dataset, size_t *out_rows);

// # Safety
// `dataset` must come from this library; null is ignored.
void kexpr_dataset_free(struct KexprDataset *dataset);

// Default run configuration.
//
// # Safety
// `out_config` must be a valid pointer.
enum KexprStatus kexpr_config_new(struct KexprConfig **out_config);

// Reads a `key = value` parameter file.
//
// # Safety
// `path` must be a NUL-terminated string.
enum KexprStatus kexpr_config_from_file(const char *path, struct KexprConfig **out_config);

// Parses parameter-file text.
//
// # Safety
// `params` must be a NUL-terminated string.
enum KexprStatus kexpr_config_from_string(const char *params, struct KexprConfig **out_config);

// # Safety
// `config` must be valid.
enum KexprStatus kexpr_config_set_seed(struct KexprConfig *config, uint64_t seed);

// # Safety
// `config` must be valid.
enum KexprStatus kexpr_config_set_generations(struct KexprConfig *config, size_t generations);

// Selects `"gep"`, `"nsga2"` or `"spea2"`.
//
// # Safety
// `config` must be valid and `algorithm` NUL-terminated.
enum KexprStatus kexpr_config_set_algorithm(struct KexprConfig *config, const char *algorithm);

// # Safety
// `config` must come from this library; null is ignored.
void kexpr_config_free(struct KexprConfig *config);

// Runs one evolution. Blocks until done.
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_run(const struct KexprConfig *config,
                           const struct KexprDataset *train,
                           struct KexprRun **out_run);

// Number of models on the final front (1 for plain GEP).
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_run_front_len(const struct KexprRun *run, size_t *out_len);

// Objectives of front member `index` (sorted by error).
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_run_front_objectives(const struct KexprRun *run,
                                            size_t index,
                                            double *out_error,
                                            size_t *out_size);

// Infix form of front member `index`; free with [`kexpr_string_free`].
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_run_front_infix(const struct KexprRun *run, size_t index, char **out_text);

// Infix form of the run's best model (the knee point for multi-objective
// runs); free with [`kexpr_string_free`].
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_run_best_infix(const struct KexprRun *run, char **out_text);

// # Safety
// `run` must come from this library; null is ignored.
void kexpr_run_free(struct KexprRun *run);

// Parses an infix expression.
//
// # Safety
// `text` must be NUL-terminated.
enum KexprStatus kexpr_expr_parse(const char *expression, struct KexprExpr **out_expr);

// Node count; with `genes > 0`, the top-level `+` links between that many
// genes are not counted.
//
// # Safety
// Pointers must be valid.
enum KexprStatus kexpr_expr_size(const struct KexprExpr *expr, size_t genes, size_t *out_size);

// RRSE of an expression over a dataset, skipping rows where it is not
// finite; `out_invalid` (may be null) receives the skipped row count.
//
// # Safety
// Pointers must be valid; `out_invalid` may be null.
enum KexprStatus kexpr_expr_rrse(const struct KexprExpr *expr,
                                 const struct KexprDataset *dataset,
                                 double *out_rrse,
                                 size_t *out_invalid);

// # Safety
// `expr` must come from this library; null is ignored.
void kexpr_expr_free(struct KexprExpr *expr);

// Parses `expression` and writes its node count (see [`kexpr_expr_size`]).
//
// # Safety
// `expression` must be NUL-terminated; `out_size` valid.
enum KexprStatus kexpr_size_of(const char *expression, size_t genes, size_t *out_size);

// RRSE of `n` predictions against `n` targets.
//
// # Safety
// `predictions` and `targets` must point to `n` doubles each.
enum KexprStatus kexpr_rrse(const double *predictions,
                            const double *targets,
                            size_t n,
                            double *out_rrse);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KEXPR_H */
