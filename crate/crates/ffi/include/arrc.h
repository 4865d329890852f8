/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ARRC_H
#define ARRC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum ArrcStatus {
  ARRC_STATUS_OK = 0,
  // A required pointer was null.
  ARRC_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  ARRC_STATUS_INVALID_UTF8 = 2,
  // The source program failed to parse or type-check.
  ARRC_STATUS_DIAGNOSTIC = 3,
  // A size list, argument list, stage or level was malformed.
  ARRC_STATUS_INVALID_ARGUMENT = 4,
  // The compiler panicked. This is a bug.
  ARRC_STATUS_INTERNAL = 5,
} ArrcStatus;

// Evaluation level for [`arrc_compilation_run`].
typedef enum ArrcLevel {
  ARRC_LEVEL_SURFACE = 0,
  ARRC_LEVEL_NORM = 1,
  ARRC_LEVEL_AINF = 2,
  ARRC_LEVEL_OPT = 3,
} ArrcLevel;

// Opaque result of [`arrc_compile`].
typedef struct ArrcCompilation ArrcCompilation;

// Pass switches, all enabled by [`arrc_options_default`].
typedef struct ArrcOptions {
  bool fold;
  bool identities;
  bool licm;
  bool cse;
  bool dce;
} ArrcOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Options with every pass enabled.
struct ArrcOptions arrc_options_default(void);

// Library version as a static string. Do not free.
const char *arrc_version(void);

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread. Do not free.
const char *arrc_last_error(void);

// Compiles `source`.
//
// `sizes` is a comma-separated `NAME=NAT` list or null. `entry` names the
// definition to compile; null selects the last one. `options` may be null
// for the defaults. On success `*out` receives a handle to release with
// [`arrc_compilation_free`].
//
// # Safety
// String arguments are null or nul-terminated; `options` is null or valid;
// `out` is writable.
enum ArrcStatus arrc_compile(const char *source,
                             const char *sizes,
                             const char *entry,
                             const struct ArrcOptions *options,
                             struct ArrcCompilation **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `h` is null or a handle from [`arrc_compile`] not yet freed.
void arrc_compilation_free(struct ArrcCompilation *h);

// The entry's name and result type, as `name : type`.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum ArrcStatus arrc_compilation_signature(const struct ArrcCompilation *h, char **out);

// Listing of `stage` (`lower`, `canon`, `licm`, `cse`, `dce`, or `norm`
// for the normal form); null selects the final stage.
//
// # Safety
// `h` is a live handle; `stage` is null or nul-terminated; `out` is writable.
enum ArrcStatus arrc_compilation_listing(const struct ArrcCompilation *h,
                                         const char *stage,
                                         char **out);

// Final program as tab-separated records.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum ArrcStatus arrc_compilation_tsv(const struct ArrcCompilation *h, char **out);

// One `stage=... bindings=...` line per stage that ran.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum ArrcStatus arrc_compilation_stats(const struct ArrcCompilation *h, char **out);

// Number of bindings at `stage` (null for the final stage).
//
// # Safety
// `h` is a live handle; `stage` is null or nul-terminated; `out` is writable.
enum ArrcStatus arrc_compilation_binding_count(const struct ArrcCompilation *h,
                                               const char *stage,
                                               size_t *out);

// Evaluates the entry at `level`, one of the `ArrcLevel` values. `args` holds one `NAME=LITERAL` per line
// (null or empty when the entry has no parameters). The printed value goes
// to `*out`.
//
// # Safety
// `h` is a live handle; `args` is null or nul-terminated; `out` is writable.
enum ArrcStatus arrc_compilation_run(const struct ArrcCompilation *h,
                                     int32_t level,
                                     const char *args,
                                     char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` is null or a string from this library not yet freed.
void arrc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARRC_H */
