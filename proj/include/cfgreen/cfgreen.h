/*
 * Copyright 2026 The cfgreen Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * cfgreen: continued-fraction Green's functions for small lattice models.
 *
 * Every function returns a cfg_status. On failure the message for the
 * calling thread is available from cfg_last_error_message() until the next
 * call on that thread. Handles are opaque and must be released with the
 * matching *_destroy function; strings returned through char** must be
 * released with cfg_string_free.
 */
#ifndef CFGREEN_CFGREEN_H
#define CFGREEN_CFGREEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CFG_BUILDING_LIBRARY)
#    define CFG_API __declspec(dllexport)
#  else
#    define CFG_API __declspec(dllimport)
#  endif
#else
#  define CFG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cfg_status {
  CFG_OK = 0,
  CFG_ERR_INTERNAL = 1,
  CFG_ERR_CONFIG = 2,           /* malformed config, bad dimensions or domain */
  CFG_ERR_NUMERIC = 3,          /* conditioning failure or degenerate input */
  CFG_ERR_IO = 4,
  CFG_ERR_INVALID_ARGUMENT = 5  /* null pointers and similar API misuse */
} cfg_status;

typedef struct cfg_result cfg_result;
typedef struct cfg_operator cfg_operator;

CFG_API const char* cfg_version(void);
CFG_API const char* cfg_last_error_message(void);
CFG_API void cfg_string_free(char* s);

/* ---- experiment runs ---------------------------------------------------- */

/* subcommand: scalar | matrix | shots | stability | cost | oracle.
 * NULL or "" takes the "subcommand" key of the config. */
CFG_API cfg_status cfg_run_json(const char* subcommand, const char* config_json, cfg_result** out);

CFG_API size_t cfg_result_rows(const cfg_result* r);
CFG_API size_t cfg_result_columns(const cfg_result* r);
CFG_API const char* cfg_result_column_name(const cfg_result* r, size_t col);
CFG_API cfg_status cfg_result_value(const cfg_result* r, size_t row, size_t col, double* value);
/* Metadata lookup; returns NULL if the key is absent. */
CFG_API const char* cfg_result_metadata(const cfg_result* r, const char* key);
/* format: "csv" or "json". */
CFG_API cfg_status cfg_result_write(const cfg_result* r, const char* path, const char* format);
CFG_API cfg_status cfg_result_serialize(const cfg_result* r, const char* format, char** out);
/* Text dump of the operator chain; empty unless dump_operators was set. */
CFG_API cfg_status cfg_result_operator_dump(const cfg_result* r, char** out);
CFG_API void cfg_result_destroy(cfg_result* r);

/* ---- operators ---------------------------------------------------------- */

CFG_API cfg_status cfg_operator_hubbard(int sites, double t, double U, cfg_operator** out);
CFG_API cfg_status cfg_operator_dimer(double U, double t, cfg_operator** out);
/* Lines "<re> <im> <word>". */
CFG_API cfg_status cfg_operator_from_text(const char* text, int n_qubits, cfg_operator** out);
CFG_API cfg_status cfg_operator_to_text(const cfg_operator* op, char** out);
CFG_API cfg_status cfg_operator_commutator(const cfg_operator* a, const cfg_operator* b, cfg_operator** out);
CFG_API cfg_status cfg_operator_product(const cfg_operator* a, const cfg_operator* b, cfg_operator** out);
CFG_API cfg_status cfg_operator_dagger(const cfg_operator* a, cfg_operator** out);
CFG_API cfg_status cfg_operator_max_weight(const cfg_operator* a, int* out);
CFG_API cfg_status cfg_operator_terms(const cfg_operator* a, size_t* out);
CFG_API cfg_status cfg_operator_qubits(const cfg_operator* a, int* out);
CFG_API void cfg_operator_destroy(cfg_operator* op);

/* ---- estimates ---------------------------------------------------------- */

CFG_API cfg_status cfg_measurement_cost(int n_modes, int k0, int d, int n, double eps, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CFGREEN_CFGREEN_H */
