/* C interface of the mrrk multirate Runge-Kutta integrator. */

#ifndef MRRK_H
#define MRRK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every API function.
 */
typedef enum MrrkStatus {
  MrrkStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  MrrkStatus_NullPointer = 1,
  /**
   * Parameters were rejected (bad chain data, step sizes, grids).
   */
  MrrkStatus_InvalidArgument = 2,
  /**
   * The integration or the eigensolver failed.
   */
  MrrkStatus_IntegrationFailed = 3,
  /**
   * An internal panic was caught at the ABI boundary.
   */
  MrrkStatus_Internal = 4,
} MrrkStatus;

/**
 * Opaque chain configuration handle.
 */
typedef struct MrrkChain MrrkChain;

/**
 * Opaque result handle of one integration.
 */
typedef struct MrrkRun MrrkRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying library as a static NUL-terminated string.
 */
const char *mrrk_version(void);

/**
 * Static human-readable name of a status code.
 */
const char *mrrk_status_name(enum MrrkStatus status);

/**
 * Create a chain with explicit initial data.
 *
 * `x0` and `v0` must point to `n` doubles each. On success `*out` owns the
 * new handle; free it with [`mrrk_chain_free`].
 *
 * # Safety
 * `x0` and `v0` must be valid for reads of `n` doubles; `out` must be a
 * valid write target.
 */
enum MrrkStatus mrrk_chain_new(size_t n,
                               double m1,
                               double m2,
                               double k1,
                               double k2,
                               const double *x0,
                               const double *v0,
                               struct MrrkChain **out);

/**
 * Create the bundled ten-mass benchmark chain.
 *
 * # Safety
 * `out` must be a valid write target.
 */
enum MrrkStatus mrrk_chain_default(struct MrrkChain **out);

/**
 * Destroy a chain handle; a null handle is ignored.
 *
 * # Safety
 * `chain` must be null or a pointer obtained from a `mrrk_chain_*`
 * constructor that has not been freed yet.
 */
void mrrk_chain_free(struct MrrkChain *chain);

/**
 * Number of masses in the chain.
 *
 * # Safety
 * `chain` must be a live chain handle; `n` a valid write target.
 */
enum MrrkStatus mrrk_chain_mass_count(const struct MrrkChain *chain, size_t *n);

/**
 * Integrate `[0, t_end]` with the spline-coupled multirate scheme (RK4,
 * macro step `h_macro`, `mrfactor` micro steps per macro step).
 *
 * # Safety
 * `chain` must be a live chain handle; `out` a valid write target.
 */
enum MrrkStatus mrrk_solve_multirate(const struct MrrkChain *chain,
                                     double t_end,
                                     double h_macro,
                                     size_t mrfactor,
                                     struct MrrkRun **out);

/**
 * Integrate `[0, t_end]` with plain singlerate RK4 at step `h`.
 *
 * # Safety
 * `chain` must be a live chain handle; `out` a valid write target.
 */
enum MrrkStatus mrrk_solve_singlerate(const struct MrrkChain *chain,
                                      double t_end,
                                      double h,
                                      struct MrrkRun **out);

/**
 * Destroy a run handle; a null handle is ignored.
 *
 * # Safety
 * `run` must be null or a pointer obtained from a `mrrk_solve_*` function
 * that has not been freed yet.
 */
void mrrk_run_free(struct MrrkRun *run);

/**
 * Final time reached by the run.
 *
 * # Safety
 * `run` must be a live run handle; `t` a valid write target.
 */
enum MrrkStatus mrrk_run_final_time(const struct MrrkRun *run, double *t);

/**
 * Final positions and velocities, one entry per mass.
 *
 * # Safety
 * `run` must be a live run handle; `x` and `v` must be valid for writes of
 * as many doubles as the chain has masses.
 */
enum MrrkStatus mrrk_run_final_state(const struct MrrkRun *run, double *x, double *v);

/**
 * Right-hand-side call counters of the run (RK stage calls and their
 * scalar-evaluation total).
 *
 * # Safety
 * `run` must be a live run handle; the out pointers valid write targets.
 */
enum MrrkStatus mrrk_run_eval_counts(const struct MrrkRun *run,
                                     uint64_t *slow_calls,
                                     uint64_t *fast_calls,
                                     uint64_t *scalar_total);

/**
 * Exact chain state at time `t` from the eigendecomposition solution.
 *
 * # Safety
 * `chain` must be a live chain handle; `x` and `v` must be valid for writes
 * of as many doubles as the chain has masses.
 */
enum MrrkStatus mrrk_exact_solution(const struct MrrkChain *chain, double t, double *x, double *v);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MRRK_H */
