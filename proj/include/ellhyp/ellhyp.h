/* Copyright 2026 The ellhyp Authors
 * SPDX-License-Identifier: Apache-2.0 */
#ifndef ELLHYP_ELLHYP_H_
#define ELLHYP_ELLHYP_H_

#include <stddef.h>

#if defined(ELLHYP_BUILDING_LIBRARY)
#define ELLHYP_API __attribute__((visibility("default")))
#else
#define ELLHYP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Mirrors the core error codes; ELLHYP_E_INTERNAL covers anything else. */
typedef enum ellhyp_status {
  ELLHYP_OK = 0,
  ELLHYP_E_INVALID_ARGUMENT = 1,
  ELLHYP_E_POLE = 2,
  ELLHYP_E_NOT_FOUND = 3,
  ELLHYP_E_PARSE = 4,
  ELLHYP_E_INFEASIBLE = 5,
  ELLHYP_E_NO_CONVERGENCE = 6,
  ELLHYP_E_UNSUPPORTED = 7,
  ELLHYP_E_OVERFLOW = 8,
  ELLHYP_E_IO = 9,
  ELLHYP_E_INTERNAL = 10
} ellhyp_status;

typedef enum ellhyp_verdict {
  ELLHYP_PASS = 0,
  ELLHYP_FAIL = 1,
  ELLHYP_NO_CONVERGE = 2
} ellhyp_verdict;

typedef enum ellhyp_variant { ELLHYP_GAMMA_PQ = 0, ELLHYP_GAMMA_PQ2 = 1, ELLHYP_GAMMA_HALF = 2 } ellhyp_variant;

typedef struct ellhyp_complex {
  double re;
  double im;
} ellhyp_complex;

typedef struct ellhyp_catalog ellhyp_catalog;
typedef struct ellhyp_report ellhyp_report;

ELLHYP_API const char* ellhyp_version(void);
ELLHYP_API const char* ellhyp_status_name(ellhyp_status status);
/* Message of the last failure on this thread; "" after a success. */
ELLHYP_API const char* ellhyp_last_error(void);

/* Accepts "a", "bi", "a+bi" and "a-bi". */
ELLHYP_API ellhyp_status ellhyp_parse_complex(const char* text, ellhyp_complex* out);

/* Strings returned through char** are owned by the caller. */
ELLHYP_API void ellhyp_string_free(char* s);

ELLHYP_API ellhyp_status ellhyp_gamma(ellhyp_variant variant, ellhyp_complex x, ellhyp_complex p,
                                      ellhyp_complex q, ellhyp_complex* out);
/* Value plus truncation diagnostics. */
ELLHYP_API ellhyp_status ellhyp_gamma_json(ellhyp_variant variant, ellhyp_complex x, ellhyp_complex p,
                                           ellhyp_complex q, char** out_json);

/* dir may be NULL for ELLHYP_CATALOG_DIR or the installed catalog. */
ELLHYP_API ellhyp_status ellhyp_catalog_open(const char* dir, ellhyp_catalog** out);
ELLHYP_API void ellhyp_catalog_close(ellhyp_catalog* catalog);
ELLHYP_API ellhyp_status ellhyp_catalog_size(const ellhyp_catalog* catalog, size_t* out);
ELLHYP_API ellhyp_status ellhyp_catalog_list_json(const ellhyp_catalog* catalog, char** out_json);

/* request: {"identity", "n", "m", "form", "p", "q", "seed", "params", "signs",
 * "grid": {"n0", "n_max", "rtol"}, "threads", "timing"} */
ELLHYP_API ellhyp_status ellhyp_verify_json(const ellhyp_catalog* catalog, const char* request,
                                            ellhyp_report** out);
ELLHYP_API ellhyp_status ellhyp_report_verdict(const ellhyp_report* report, ellhyp_verdict* out);
ELLHYP_API ellhyp_status ellhyp_report_rel_err(const ellhyp_report* report, double* out);
ELLHYP_API ellhyp_status ellhyp_report_json(const ellhyp_report* report, char** out_json);
ELLHYP_API void ellhyp_report_free(ellhyp_report* report);

/* options: {"suite", "seeds", "first_seed", "p", "q", "jobs", "only",
 * "cache_dir", "grid", "threads", "timing"}. exit_code gets 0, 2 or 3. */
ELLHYP_API ellhyp_status ellhyp_suite_json(const ellhyp_catalog* catalog, const char* options,
                                           char** out_json, int* exit_code);

/* A corpus case name, a case file path, or an inline case document. */
ELLHYP_API ellhyp_status ellhyp_fubini_case_json(const char* name_path_or_json, char** out_json);
/* Every corpus case, one result each. */
ELLHYP_API ellhyp_status ellhyp_fubini_corpus_json(const char* dir, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ELLHYP_ELLHYP_H_ */
