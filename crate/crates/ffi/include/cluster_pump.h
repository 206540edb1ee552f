#ifndef CLUSTER_PUMP_H
#define CLUSTER_PUMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  CP_STATUS_INVALID_INPUT = 3,
  CP_STATUS_COMPILE_FAILED = 4,
  CP_STATUS_RESOURCE_CAP = 5,
  CP_STATUS_PANIC = 6,
} CpStatus;

/**
 * Perturbation type for [`cp_perturb`].
 */
typedef enum CpPerturbation {
  CP_PERTURBATION_Z_TYPE = 0,
  CP_PERTURBATION_X_TYPE = 1,
} CpPerturbation;

/**
 * Opaque circuit handle.
 */
typedef struct CpCircuit CpCircuit;

/**
 * Opaque lattice handle.
 */
typedef struct CpLattice CpLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call on this thread.
 */
const char *cp_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *cp_version(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` is NULL or a string returned by this library that was not yet freed.
 */
void cp_string_free(char *s);

/**
 * Build a lattice from a family description such as
 * `{"lattice":"square","nx":4,"ny":4,"termination":"open"}`.
 *
 * # Safety
 * `family_json` is a valid C string; `out` is writable.
 */
enum CpStatus cp_lattice_build(const char *family_json, struct CpLattice **out);

/**
 * Load a lattice from its full JSON spec.
 *
 * # Safety
 * `spec_json` is a valid C string; `out` is writable.
 */
enum CpStatus cp_lattice_from_json(const char *spec_json, struct CpLattice **out);

/**
 * Serialize a lattice to JSON.
 *
 * # Safety
 * `lattice` is a live handle; `out` is writable.
 */
enum CpStatus cp_lattice_to_json(const struct CpLattice *lattice, char **out);

/**
 * Number of qubits, 0 for NULL.
 *
 * # Safety
 * `lattice` is NULL or a live handle.
 */
size_t cp_lattice_num_sites(const struct CpLattice *lattice);

/**
 * # Safety
 * `lattice` is NULL or a handle not yet freed.
 */
void cp_lattice_free(struct CpLattice *lattice);

/**
 * Compile the lattice's pump into its reduced circuit.
 *
 * # Safety
 * `lattice` is a live handle; `out` is writable.
 */
enum CpStatus cp_compile(const struct CpLattice *lattice, struct CpCircuit **out);

/**
 * Parse a circuit in the text format.
 *
 * # Safety
 * `text` is a valid C string; `out` is writable.
 */
enum CpStatus cp_circuit_from_text(const char *text, struct CpCircuit **out);

/**
 * Render a circuit in the text format.
 *
 * # Safety
 * `circuit` is a live handle; `out` is writable.
 */
enum CpStatus cp_circuit_to_text(const struct CpCircuit *circuit, char **out);

/**
 * Gate count, 0 for NULL.
 *
 * # Safety
 * `circuit` is NULL or a live handle.
 */
size_t cp_circuit_num_gates(const struct CpCircuit *circuit);

/**
 * # Safety
 * `circuit` is NULL or a handle not yet freed.
 */
void cp_circuit_free(struct CpCircuit *circuit);

/**
 * Verify a circuit against the lattice. A failed verification is reported
 * through `pass`, not the status. `report_json` may be NULL.
 *
 * # Safety
 * Handles are live; `pass` is writable; `report_json` is NULL or writable.
 */
enum CpStatus cp_verify(const struct CpLattice *lattice,
                        const struct CpCircuit *circuit,
                        bool *pass,
                        char **report_json);

/**
 * Symmetry certificate for every term/generator pair. `report_json` may be
 * NULL.
 *
 * # Safety
 * `lattice` is live; `pass` is writable; `report_json` is NULL or writable.
 */
enum CpStatus cp_symcheck(const struct CpLattice *lattice, bool *pass, char **report_json);

/**
 * Post-selected perturbation run; the result is written as JSON.
 *
 * # Safety
 * `lattice` is live; `result_json` is writable.
 */
enum CpStatus cp_perturb(const struct CpLattice *lattice,
                         enum CpPerturbation kind,
                         double epsilon,
                         uint64_t seed,
                         size_t samples,
                         char **result_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTER_PUMP_H */
