/* SPDX-License-Identifier: Apache-2.0 */

/*
 * f4solv C API.
 *
 * Every function returns an f4_status. On failure the output handle is left
 * NULL and f4_last_error() describes the problem for the calling thread.
 * Handles are opaque and must be released with the matching *_destroy call.
 * Rationals are passed as "num/den" (or integer) strings.
 */

#ifndef F4SOLV_F4SOLV_H
#define F4SOLV_F4SOLV_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define F4_API __declspec(dllexport)
#else
#define F4_API __attribute__((visibility("default")))
#endif

typedef enum f4_status {
  F4_OK = 0,
  /* A checked claim did not hold. */
  F4_MISMATCH = 2,
  /* Structural anomaly: flag not preserved, defective or irreducible block,
     singular point, internal failure. */
  F4_ANOMALY = 3,
  /* Bad arguments. */
  F4_USAGE = 64
} f4_status;

typedef struct f4_params f4_params;
typedef struct f4_operator f4_operator;
typedef struct f4_report f4_report;

/* Options shared by the commands; f4_options_init fills the defaults. */
typedef struct f4_options {
  const char* frame;   /* "native" (also "t", "tau") or "rho" */
  const char* charvec; /* "1,2,2,3" or "2,2,3" */
  int level;           /* < 0: command default */
  unsigned long long seed;
  int points;          /* oracle points */
  int bound;           /* scan bound per component */
  const char* format;  /* "table", "json" or "csv" */
} f4_options;

F4_API void f4_options_init(f4_options* opts);

/* model is "rational" or "trig"; omega is required for rational, beta2 for
   trig, the other may be NULL. */
F4_API f4_status f4_params_create(const char* model, const char* nu, const char* mu,
                                  const char* omega, const char* beta2, f4_params** out);
/* {"model": ..., "nu": "num/den", "mu": ..., "omega"?: ..., "beta2"?: ...} */
F4_API f4_status f4_params_from_json(const char* json, f4_params** out);
F4_API void f4_params_destroy(f4_params* params);

/* frame: "native" or "rho". */
F4_API f4_status f4_operator_build(const f4_params* params, const char* frame, f4_operator** out);
F4_API void f4_operator_destroy(f4_operator* op);
/* Operator as JSON text in a report. */
F4_API f4_status f4_operator_to_json(const f4_operator* op, f4_report** out);

/* Command entry points. The returned status mirrors f4_report_verdict; the
   report is produced whenever the command ran to completion. */
F4_API f4_status f4_spectrum(const f4_params* params, const f4_options* opts, f4_report** out);
F4_API f4_status f4_eigenfunctions(const f4_params* params, const f4_options* opts, f4_report** out);
/* suite: "flag", "triangular", "oracle", "limit", "a66" or "scan". */
F4_API f4_status f4_verify(const f4_params* params, const char* suite, const f4_options* opts,
                           f4_report** out);
F4_API f4_status f4_scan_flags(const f4_params* params, const f4_options* opts, f4_report** out);
F4_API f4_status f4_dump_operator(const f4_params* params, const f4_options* opts, f4_report** out);

/* Rendered output, owned by the report. */
F4_API const char* f4_report_text(const f4_report* report);
F4_API f4_status f4_report_verdict(const f4_report* report);
F4_API void f4_report_destroy(f4_report* report);

/* Message for the last failing call on this thread; "" if none. */
F4_API const char* f4_last_error(void);
F4_API const char* f4_version(void);

#ifdef __cplusplus
}
#endif

#endif /* F4SOLV_F4SOLV_H */
