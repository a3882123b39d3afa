#ifndef HARDYLAB_H
#define HARDYLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Cutoff selector for `cutoff` arguments.
typedef enum HlCutoff {
  HL_CUTOFF_QUINTIC_SMOOTHSTEP = 0,
  HL_CUTOFF_LINEAR = 1,
} HlCutoff;

// Inequality selector for `kind` arguments.
typedef enum HlKind {
  HL_KIND_HARDY = 0,
  HL_KIND_NEW_HARDY = 1,
  HL_KIND_HARDY_RELLICH_INT = 2,
  HL_KIND_IMPROVED_HARDY_RELLICH = 3,
  HL_KIND_RELLICH_P = 4,
  HL_KIND_RELLICH_CHAIN = 5,
} HlKind;

typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_INVALID_PARAMETER = 1,
  HL_STATUS_DIVERGENT_INTEGRAL = 2,
  HL_STATUS_ZERO_DENOMINATOR = 3,
  HL_STATUS_FIT_DEGENERATE = 4,
  HL_STATUS_MALFORMED_CSV = 5,
  HL_STATUS_IO = 6,
  HL_STATUS_NULL_POINTER = 7,
  HL_STATUS_INVALID_UTF8 = 8,
  HL_STATUS_PANIC = 9,
} HlStatus;

// A step function on `(0, R]`.
typedef struct HlStepFunction HlStepFunction;

// Result of an ε-sweep.
typedef struct HlSweepResult HlSweepResult;

typedef struct HlRatioReport {
  uint32_t kind;
  double p;
  double numerator;
  // Meaningful only when `has_middle` is non-zero.
  double middle;
  uint8_t has_middle;
  double denominator;
  double sharp;
  double ratio;
  double slack;
  size_t quad_order;
  double refinement_estimate;
} HlRatioReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a
// successful call. Valid until the next library call on the same thread.
const char *hl_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void hl_string_free(char *s);

// Builds a step function from `n_values + 1` edges starting at 0.
//
// # Safety
// `edges` and `values` must point to `n_edges` and `n_values` readable
// doubles; `out` must be writable.
enum HlStatus hl_step_function_new(const double *edges,
                                   size_t n_edges,
                                   const double *values,
                                   size_t n_values,
                                   struct HlStepFunction **out);

// # Safety
// `f` must be NULL or a handle from this library, not yet freed.
void hl_step_function_free(struct HlStepFunction *f);

// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_step_function_cell_count(const struct HlStepFunction *f, size_t *out);

// Copies the `cell_count + 1` edges into `buf` when `cap` is large enough;
// `needed` always receives the required length.
//
// # Safety
// `f` must be a live handle, `buf` must have room for `cap` doubles and
// `needed` must be writable.
enum HlStatus hl_step_function_edges(const struct HlStepFunction *f,
                                     double *buf,
                                     size_t cap,
                                     size_t *needed);

// Copies the cell values, same conventions as [`hl_step_function_edges`].
//
// # Safety
// As for [`hl_step_function_edges`].
enum HlStatus hl_step_function_values(const struct HlStepFunction *f,
                                      double *buf,
                                      size_t cap,
                                      size_t *needed);

// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum HlStatus hl_step_function_read_csv(const char *path, struct HlStepFunction **out);

// # Safety
// `f` must be a live handle and `path` a NUL-terminated string.
enum HlStatus hl_step_function_write_csv(const struct HlStepFunction *f, const char *path);

// Decreasing rearrangement as a new handle.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_rearrange(const struct HlStepFunction *f, struct HlStepFunction **out);

// `∫ |f|^p`.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_p_norm(const struct HlStepFunction *f, double p, double *out);

// # Safety
// `out` must be writable.
enum HlStatus hl_sharp_constant(uint32_t kind, double p, double *out);

// Evaluates one inequality. `quad_order` 0 selects the default order.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_ratio(uint32_t kind,
                       const struct HlStepFunction *f,
                       double p,
                       size_t quad_order,
                       struct HlRatioReport *out);

// As [`hl_ratio`], returning the report as a JSON string.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_ratio_json(uint32_t kind,
                            const struct HlStepFunction *f,
                            double p,
                            size_t quad_order,
                            char **out);

// `sup_s |min{1/r, 1/s} ∫₀ˢ f|`.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_supmin_transform(const struct HlStepFunction *f, double r, double *out);

// `τ · sup_s |min{1/τ, 1/s} ∫₀ˢ |f||`.
//
// # Safety
// `f` must be a live handle and `out` writable.
enum HlStatus hl_rellich_inner(const struct HlStepFunction *f, double tau, double *out);

// # Safety
// `out` must be writable.
enum HlStatus hl_minimizing_function(double p,
                                     double eps,
                                     uint32_t cutoff,
                                     size_t n_cells,
                                     double r_min,
                                     struct HlStepFunction **out);

// Runs an ε-sweep. `n_cells` 0 and `r_min` 0 select the defaults.
//
// # Safety
// `eps` must point to `n_eps` readable doubles and `out` be writable.
enum HlStatus hl_sharpness_sweep(uint32_t kind,
                                 double p,
                                 const double *eps,
                                 size_t n_eps,
                                 uint32_t cutoff,
                                 size_t n_cells,
                                 double r_min,
                                 struct HlSweepResult **out);

// # Safety
// `s` must be NULL or a handle from this library, not yet freed.
void hl_sweep_result_free(struct HlSweepResult *s);

// Extrapolated limit, sharp constant and relative gap.
//
// # Safety
// `s` must be a live handle; the out-pointers must be writable.
enum HlStatus hl_sweep_result_summary(const struct HlSweepResult *s,
                                      double *limit,
                                      double *sharp,
                                      double *relative_gap);

// # Safety
// `s` must be a live handle and `out` writable.
enum HlStatus hl_sweep_result_len(const struct HlSweepResult *s, size_t *out);

// # Safety
// `s` must be a live handle; the out-pointers must be writable.
enum HlStatus hl_sweep_result_point(const struct HlSweepResult *s,
                                    size_t index,
                                    double *eps,
                                    double *ratio,
                                    double *numerator,
                                    double *denominator);

// # Safety
// `s` must be a live handle and `out` writable.
enum HlStatus hl_sweep_result_json(const struct HlSweepResult *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARDYLAB_H */
