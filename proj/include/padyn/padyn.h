#ifndef PADYN_H
#define PADYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PADYN_API __declspec(dllexport)
#else
#define PADYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; 0-3 double as process exit codes. */
typedef enum padyn_status {
  PADYN_OK = 0,
  PADYN_USAGE = 1,      /* parse error, bad option, bad argument */
  PADYN_REJECTED = 2,   /* the map does not extend to the model */
  PADYN_PRECISION = 3,  /* precision exhausted or internal failure */
  PADYN_NULL_ARG = 4
} padyn_status;

typedef struct padyn_session padyn_session;

PADYN_API const char* padyn_version(void);

/* Message for the last failing call on this thread ("" if none). */
PADYN_API const char* padyn_last_error(void);

/* Parse a map description ([model] / [options] text). */
PADYN_API padyn_status padyn_session_open_text(const char* text, padyn_session** out);
PADYN_API padyn_status padyn_session_open_file(const char* path, padyn_session** out);
PADYN_API void padyn_session_close(padyn_session* s);

/* Keys: precision, val_floor, point, shell_period_cap. */
PADYN_API padyn_status padyn_session_set_option(padyn_session* s, const char* key, const char* value);

/* subcommand: analyze, enumerate, decompose, verify, cubic. On success (and on
   PADYN_REJECTED) *report receives a string owned by the caller; free it with
   padyn_string_free. */
PADYN_API padyn_status padyn_run(padyn_session* s, const char* subcommand, int json, char** report);
PADYN_API void padyn_string_free(char* str);

/* Closed-form bounds; PADYN_USAGE on invalid input or overflow. */
PADYN_API padyn_status padyn_bound_general(uint64_t count, uint64_t p, int e, uint64_t q, int dprime,
                                           uint64_t* out);
PADYN_API padyn_status padyn_bound_cubic(uint64_t p, int e, uint64_t q, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif
