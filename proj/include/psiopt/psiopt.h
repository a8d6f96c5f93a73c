// Copyright 2026 The psiopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to libpsiopt.
 *
 * All functions return a psiopt_status. On failure the message for the
 * calling thread is available from psiopt_last_error() until the next call.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with psiopt_string_free(). Handles are released with their
 * matching *_free function; passing NULL to any *_free is a no-op.
 */
#ifndef PSIOPT_PSIOPT_H_
#define PSIOPT_PSIOPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PSIOPT_BUILDING_LIBRARY)
#    define PSIOPT_API __declspec(dllexport)
#  else
#    define PSIOPT_API __declspec(dllimport)
#  endif
#else
#  define PSIOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psiopt_status {
  PSIOPT_OK = 0,
  PSIOPT_ERR_INVALID_ARGUMENT = 1,
  PSIOPT_ERR_MODULUS_MISMATCH = 2,
  PSIOPT_ERR_LENGTH_MISMATCH = 3,
  PSIOPT_ERR_OUT_OF_RANGE = 4,
  PSIOPT_ERR_RANDOMNESS_EXHAUSTED = 5,
  PSIOPT_ERR_PROTOCOL_CORRUPTION = 6,
  PSIOPT_ERR_MODEL_VIOLATION = 7,
  PSIOPT_ERR_TOO_LARGE = 8,
  PSIOPT_ERR_PARSE = 9,
  PSIOPT_ERR_IO = 10,
  PSIOPT_ERR_NULL_ARGUMENT = 11,
  PSIOPT_ERR_INTERNAL = 99
} psiopt_status;

typedef struct psiopt_scenario psiopt_scenario;
typedef struct psiopt_report psiopt_report;

typedef enum psiopt_scheme {
  PSIOPT_SCHEME_OPTIMIZE = 0, /* sequential CarPSI/FindPSI search for P* */
  PSIOPT_SCHEME_NAIVE = 1     /* PSI on all of P1, then optimize locally */
} psiopt_scheme;

PSIOPT_API const char* psiopt_version(void);
PSIOPT_API const char* psiopt_last_error(void);
PSIOPT_API const char* psiopt_status_name(psiopt_status status);
PSIOPT_API void psiopt_string_free(char* s);

/* Scenarios */
PSIOPT_API psiopt_status psiopt_scenario_load(const char* path, psiopt_scenario** out);
PSIOPT_API psiopt_status psiopt_scenario_parse(const char* json, psiopt_scenario** out);
PSIOPT_API void psiopt_scenario_free(psiopt_scenario* s);
PSIOPT_API psiopt_status psiopt_scenario_set_n2(psiopt_scenario* s, size_t n2);
PSIOPT_API psiopt_status psiopt_scenario_set_seed(psiopt_scenario* s, uint64_t seed);
PSIOPT_API psiopt_status psiopt_scenario_to_json(const psiopt_scenario* s, char** out);

/* Protocol runs */
PSIOPT_API psiopt_status psiopt_run(const psiopt_scenario* s, psiopt_scheme scheme,
                                    psiopt_report** out);
PSIOPT_API psiopt_status psiopt_run_thpsi(const psiopt_scenario* s, size_t threshold,
                                          psiopt_report** out);
PSIOPT_API void psiopt_report_free(psiopt_report* r);

typedef struct psiopt_cost {
  size_t download;      /* simulated D */
  size_t predicted;     /* closed-form D for the realized run */
  size_t d_psi;         /* naive PSI cost */
  size_t rank;          /* R (0 for ThPSI) */
  size_t alpha;         /* alpha_R */
  size_t multiplicity;  /* M_R, or |P1 ∩ P2| for ThPSI */
  int skipped;          /* last singleton group accepted without a query */
  int match;            /* download == predicted */
  int oracle_match;     /* result agrees with brute force */
  int has_set;          /* ThPSI: intersection revealed */
} psiopt_cost;

PSIOPT_API psiopt_status psiopt_report_cost(const psiopt_report* r, psiopt_cost* out);
/* Result set formatted as "{C,G}"; "{}" when ThPSI withholds it. */
PSIOPT_API psiopt_status psiopt_report_set(const psiopt_report* r, char** out);
PSIOPT_API psiopt_status psiopt_report_json(const psiopt_report* r, char** out);
PSIOPT_API psiopt_status psiopt_report_cost_json(const psiopt_report* r, char** out);
PSIOPT_API psiopt_status psiopt_report_transcript_jsonl(const psiopt_report* r, char** out);

/* Analytics */
PSIOPT_API size_t psiopt_d_psi(size_t p1, size_t n2);

typedef struct psiopt_leakage {
  double bits_scheme;
  double bits_nominal;
  double bits_naive;
  size_t space;
  int scheme_equals_nominal;
  int naive_refines_scheme;
  int naive_strictly_finer;
} psiopt_leakage;

/* json_out may be NULL. */
PSIOPT_API psiopt_status psiopt_leakage_report(const psiopt_scenario* s, psiopt_leakage* out,
                                               char** json_out);

/* P_eq(T, M) table; *all_equal is set when closed form == enumeration on
 * every row. */
PSIOPT_API psiopt_status psiopt_peq_csv(size_t p1, size_t t_lo, size_t t_hi, size_t m_lo,
                                        size_t m_hi, char** csv_out, int* all_equal);

/* Grid strings use the form "k=4:6,n2=2:4,t=1:3,p1=4,p2=4,cap=1000000". An
 * empty string selects the default grid. */
PSIOPT_API psiopt_status psiopt_sweep_csv(const char* grid, char** csv_out);
PSIOPT_API psiopt_status psiopt_thpsi_sweep_csv(const char* grid, char** csv_out);

typedef struct psiopt_verify_summary {
  size_t rows;
  size_t cost_match;
  size_t bound_ok;
  size_t skip_rows;
  size_t skip_ok;
  size_t oracle_ok;
  size_t thpsi_rows;
  size_t thpsi_cost_match;
  size_t leakage_rows;
  size_t leakage_pass;
  int all_pass;
} psiopt_verify_summary;

PSIOPT_API psiopt_status psiopt_verify(const char* grid, psiopt_verify_summary* out,
                                       char** text_out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* PSIOPT_PSIOPT_H_ */
