#ifndef HSPSIM_H
#define HSPSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HspStatus {
  HSP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HSP_STATUS_NULL_POINTER = 1,
  /**
   * Bad input: malformed text, out-of-range index or invalid group data.
   */
  HSP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A structural invariant failed during simulation.
   */
  HSP_STATUS_INVARIANT = 3,
  /**
   * A size or escalation cap was reached.
   */
  HSP_STATUS_RESOURCE_CAP = 4,
  /**
   * An output buffer is too small; the needed length was still written.
   */
  HSP_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * The library panicked. This is a bug.
   */
  HSP_STATUS_PANIC = 6,
} HspStatus;

/**
 * A finite group together with its subgroup catalog.
 */
typedef struct HspGroup HspGroup;

/**
 * An oracle hiding one subgroup of an [`HspGroup`], with its query ledger.
 */
typedef struct HspOracle HspOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *hsp_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hsp_version(void);

/**
 * Builds a group from a spec such as `"Z:6"`, `"D:4"`, `"Q8"`, `"S:3"`,
 * `"Z2^3"` or a JSON `{"order","table"}` document.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HspStatus hsp_group_new(const char *spec, struct HspGroup **out);

/**
 * # Safety
 * `group` must come from [`hsp_group_new`] and not be used afterwards.
 * Null is ignored.
 */
void hsp_group_free(struct HspGroup *group);

/**
 * Group order, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t hsp_group_order(const struct HspGroup *group);

/**
 * Number of subgroups, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t hsp_group_subgroup_count(const struct HspGroup *group);

/**
 * Product `a·b` of two element ids.
 *
 * # Safety
 * `group` must be a live handle and `out` a valid pointer.
 */
enum HspStatus hsp_group_mul(const struct HspGroup *group, size_t a, size_t b, size_t *out);

/**
 * Member ids of catalog entry `index` (largest subgroups first).
 *
 * Writes the member count to `out_len` even when the buffer is too small.
 *
 * # Safety
 * `out` must have room for `cap` entries.
 */
enum HspStatus hsp_group_subgroup(const struct HspGroup *group,
                                  size_t index,
                                  size_t *out,
                                  size_t cap,
                                  size_t *out_len);

/**
 * Creates an oracle hiding the subgroup with the given member ids.
 *
 * # Safety
 * `members` must point to `len` ids; `out` must be a valid pointer.
 */
enum HspStatus hsp_oracle_new(const struct HspGroup *group,
                              const size_t *members,
                              size_t len,
                              struct HspOracle **out);

/**
 * # Safety
 * `oracle` must come from [`hsp_oracle_new`] and not be used afterwards.
 * Null is ignored.
 */
void hsp_oracle_free(struct HspOracle *oracle);

/**
 * One classical oracle call: the coset label of element `g`.
 *
 * # Safety
 * `oracle` must be a live handle and `out` a valid pointer.
 */
enum HspStatus hsp_oracle_query(struct HspOracle *oracle, size_t g, size_t *out);

/**
 * Total oracle calls charged so far, or 0 for a null handle.
 *
 * # Safety
 * `oracle` must be null or a live handle.
 */
uint64_t hsp_oracle_query_count(const struct HspOracle *oracle);

/**
 * Identifies the hidden subgroup exactly and writes a generating set.
 *
 * `s = 0` picks the copy count automatically; `s_cap = 0` uses the default
 * escalation cap. Queries are charged to the oracle's ledger.
 *
 * # Safety
 * `out` must have room for `cap` entries; `out_len` must be valid.
 */
enum HspStatus hsp_identify(struct HspOracle *oracle,
                            uint32_t s,
                            uint32_t s_cap,
                            size_t *out,
                            size_t cap,
                            size_t *out_len);

/**
 * Runs the command-line driver on `argv` (without a program name) and
 * returns the serialized report in `*out`.
 *
 * A report whose checks fail is still returned, with status
 * [`HspStatus::Invariant`].
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `out` must be valid.
 */
enum HspStatus hsp_run(const char *const *argv, size_t argc, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void hsp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSPSIM_H */
