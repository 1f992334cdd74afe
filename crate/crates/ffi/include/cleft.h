#ifndef CLEFT_H
#define CLEFT_H

/* Generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CLEFT_OK 0

#define CLEFT_ERR_CHECKS 1

#define CLEFT_ERR_PARSE 2

#define CLEFT_ERR_AXIOM 3

#define CLEFT_ERR_UNSUPPORTED 4

// An opaque, fully validated instance.
typedef struct CleftInstance CleftInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates an instance from a JSON string.  On success writes
// a handle to `out` and returns 0; otherwise returns an error code and
// leaves a message for [`cleft_last_error`].
//
// # Safety
// `json` must be a valid NUL-terminated C string; `out` must be a valid
// pointer to writable memory.
int32_t cleft_parse(const char *json, struct CleftInstance **out);

// Releases a handle returned by [`cleft_parse`].  `NULL` is ignored.
//
// # Safety
// `handle` must be a pointer previously returned by [`cleft_parse`] and
// not yet freed.
void cleft_free(struct CleftInstance *handle);

// Releases a string returned by [`cleft_command`].  `NULL` is ignored.
//
// # Safety
// `s` must be a pointer previously returned by this library and not yet
// freed.
void cleft_string_free(char *s);

// The last error message on this thread, valid until the next library
// call on the same thread.  Never `NULL`.
const char *cleft_last_error(void);

// Runs a command (`"verify"`, `"hh"`, `"hcoh"`, `"whh"`, `"whcoh"`,
// `"cyclic"`) against a handle.  `nmax` bounds the reported degrees;
// `trunc` is the truncation level for the negative/periodic towers
// (ignored elsewhere).  On success writes a JSON report to `out_json`
// (release with [`cleft_string_free`]) and returns 0, or 1 if the report
// contains a failed check (the report is still written).
//
// # Safety
// `handle` must be a live handle from [`cleft_parse`]; `command` a valid
// NUL-terminated C string; `out_json` a valid writable pointer.
int32_t cleft_command(const struct CleftInstance *handle,
                      const char *command,
                      size_t nmax,
                      size_t trunc,
                      char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLEFT_H */
