#ifndef SPINRING_FFI_H
#define SPINRING_FFI_H

#pragma once

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpinringStatus {
  SPINRING_STATUS_OK = 0,
  SPINRING_STATUS_NULL_POINTER = 1,
  SPINRING_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or a configuration that fails validation.
  SPINRING_STATUS_INVALID_CONFIG = 3,
  // Qubit index, subset or dimension out of range.
  SPINRING_STATUS_OUT_OF_RANGE = 4,
  // Request exceeds a size guard.
  SPINRING_STATUS_TOO_LARGE = 5,
  // Output buffer shorter than required.
  SPINRING_STATUS_BUFFER_TOO_SMALL = 6,
  // Numerical check failed.
  SPINRING_STATUS_NUMERIC = 7,
  SPINRING_STATUS_INTERNAL = 8,
} SpinringStatus;

// Opaque network: configuration, current state and steps done per agent.
typedef struct SpinringNetwork SpinringNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a network from a JSON configuration (keys `K`, `M`, `theta`,
// `alpha`, `offsets`, `schedule`, `initial`; `steps` is ignored).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer. On
// success `*out` owns a handle to release with [`spinring_network_free`].
enum SpinringStatus spinring_network_new_from_json(const char *json, struct SpinringNetwork **out);

// # Safety
// `network` must come from [`spinring_network_new_from_json`] and not be
// used afterwards. Null is ignored.
void spinring_network_free(struct SpinringNetwork *network);

// Advances every agent by `steps` steps. Each call schedules its own steps,
// so splitting a multi-agent run at an odd step count can reorder gates of
// different agents. If the run fails the network is reset to its initial
// state.
//
// # Safety
// `network` must be a live handle not used concurrently.
enum SpinringStatus spinring_network_run(struct SpinringNetwork *network, uintptr_t steps);

// Steps done per agent since creation.
//
// # Safety
// `network` must be a live handle and `out` a valid pointer.
enum SpinringStatus spinring_network_steps(const struct SpinringNetwork *network, uintptr_t *out);

// Number of qubits, agents first, then ring sites.
//
// # Safety
// `network` must be a live handle and `out` a valid pointer.
enum SpinringStatus spinring_network_n_qubits(const struct SpinringNetwork *network,
                                              uintptr_t *out);

// Writes the reduced Bloch vector `(λ1, λ2, λ3)` of `qubit` to `out[0..3]`.
//
// # Safety
// `network` must be a live handle and `out` point to three doubles.
enum SpinringStatus spinring_network_bloch(const struct SpinringNetwork *network,
                                           uintptr_t qubit,
                                           double *out);

// Copies the amplitudes as interleaved `re, im` pairs. `len` counts
// doubles and must be at least `2 * 2^n_qubits`.
//
// # Safety
// `network` must be a live handle and `buf` hold `len` doubles.
enum SpinringStatus spinring_network_amplitudes(const struct SpinringNetwork *network,
                                                double *buf,
                                                uintptr_t len);

// Total of all cluster sums and its distance from `2^N - 1`.
//
// # Safety
// `network` must be a live handle; `total` and `defect` valid pointers.
enum SpinringStatus spinring_network_sum_rule(const struct SpinringNetwork *network,
                                              double *total,
                                              double *defect);

// Cluster sum `Y` and bound `Z` of the qubits in `subset[0..len]`.
//
// # Safety
// `network` must be a live handle, `subset` hold `len` indices, and `y`,
// `z` be valid pointers.
enum SpinringStatus spinring_network_cluster_sum(const struct SpinringNetwork *network,
                                                 const uintptr_t *subset,
                                                 uintptr_t len,
                                                 double *y,
                                                 double *z);

// Closed recursion for one type-0 agent on a ground-state ring of `sites`
// sites. Writes `(Y_m, Z_m)` for `m = 1..=steps` to `y_out` and `z_out`.
//
// # Safety
// `y_out` and `z_out` must each hold `len >= steps` doubles.
enum SpinringStatus spinring_recursion(uintptr_t sites,
                                       double alpha,
                                       uintptr_t steps,
                                       double *y_out,
                                       double *z_out,
                                       uintptr_t len);

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *spinring_last_error_message(void);

// Library version, NUL-terminated and static.
const char *spinring_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINRING_FFI_H */
