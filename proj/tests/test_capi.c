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

/* C API smoke test, compiled as C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cfgreen/cfgreen.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static size_t column(const cfg_result* r, const char* name) {
  size_t c;
  for (c = 0; c < cfg_result_columns(r); ++c)
    if (strcmp(cfg_result_column_name(r, c), name) == 0) return c;
  return (size_t)-1;
}

static void test_run(void) {
  const char* cfg =
      "{\"model\":\"dimer\",\"U\":4,\"pool\":\"n_up:0\",\"levels\":[4],"
      "\"grid\":{\"omega_min\":-2,\"omega_max\":10,\"points\":25,\"eta\":0.1}}";
  cfg_result* r = NULL;
  size_t row, err;
  double v, worst = 0.0;
  char* csv = NULL;
  EXPECT(cfg_run_json("scalar", cfg, &r) == CFG_OK);
  if (!r) return;
  EXPECT(cfg_result_rows(r) == 25);
  err = column(r, "abs_err");
  EXPECT(err != (size_t)-1);
  for (row = 0; row < cfg_result_rows(r); ++row) {
    EXPECT(cfg_result_value(r, row, err, &v) == CFG_OK);
    if (v > worst) worst = v;
  }
  EXPECT(worst < 1e-8);
  EXPECT(cfg_result_value(r, 1000, 0, &v) == CFG_ERR_INVALID_ARGUMENT);
  EXPECT(cfg_result_column_name(r, 1000) == NULL);
  EXPECT(cfg_result_metadata(r, "no-such-key") == NULL);
  EXPECT(cfg_result_metadata(r, "version") != NULL);
  EXPECT(cfg_result_serialize(r, "csv", &csv) == CFG_OK);
  EXPECT(csv && strstr(csv, "abs_err") != NULL);
  cfg_string_free(csv);
  EXPECT(cfg_result_serialize(r, "yaml", &csv) == CFG_ERR_CONFIG);
  EXPECT(cfg_result_write(r, "/nonexistent-dir/out.csv", "csv") == CFG_ERR_IO);
  EXPECT(strlen(cfg_last_error_message()) > 0);
  cfg_result_destroy(r);
}

static void test_errors(void) {
  cfg_result* r = (cfg_result*)0x1;
  EXPECT(cfg_run_json("matrix", "{\"bogus\":1}", &r) == CFG_ERR_CONFIG);
  EXPECT(r == NULL);
  EXPECT(strstr(cfg_last_error_message(), "bogus") != NULL);
  EXPECT(cfg_run_json("matrix", NULL, &r) == CFG_ERR_INVALID_ARGUMENT);
  EXPECT(cfg_run_json("matrix", "{\"sites\":3,\"filling\":{\"up\":4,\"down\":0}}", &r) ==
         CFG_ERR_NUMERIC);
  cfg_result_destroy(NULL);
  cfg_operator_destroy(NULL);
}

static void test_operators(void) {
  cfg_operator *x = NULL, *y = NULL, *c = NULL, *h = NULL;
  char* text = NULL;
  size_t terms = 0;
  int w = 0, q = 0;
  EXPECT(cfg_operator_from_text("1 0 X", 1, &x) == CFG_OK);
  EXPECT(cfg_operator_from_text("1 0 Y", 1, &y) == CFG_OK);
  EXPECT(cfg_operator_commutator(x, y, &c) == CFG_OK);
  EXPECT(cfg_operator_to_text(c, &text) == CFG_OK);
  /* [X, Y] = 2i Z */
  EXPECT(text && strstr(text, "Z") != NULL);
  cfg_string_free(text);
  EXPECT(cfg_operator_terms(c, &terms) == CFG_OK && terms == 1);
  EXPECT(cfg_operator_from_text("1 0 Q", 1, &h) == CFG_ERR_CONFIG);
  EXPECT(cfg_operator_hubbard(3, 1.0, 2.0, &h) == CFG_OK);
  EXPECT(cfg_operator_qubits(h, &q) == CFG_OK && q == 6);
  EXPECT(cfg_operator_max_weight(h, &w) == CFG_OK && w >= 2);
  EXPECT(cfg_operator_max_weight(NULL, &w) == CFG_ERR_INVALID_ARGUMENT);
  cfg_operator_destroy(x);
  cfg_operator_destroy(y);
  cfg_operator_destroy(c);
  cfg_operator_destroy(h);
}

static void test_cost(void) {
  double a = 0, b = 0;
  EXPECT(cfg_measurement_cost(8, 1, 4, 0, 0.01, &a) == CFG_OK);
  EXPECT(cfg_measurement_cost(8, 1, 4, 0, 0.005, &b) == CFG_OK);
  EXPECT(fabs(b / a - 4.0) < 1e-12);
  EXPECT(cfg_measurement_cost(8, 1, 4, 3, 0.01, &a) == CFG_ERR_CONFIG);
}

int main(void) {
  EXPECT(strcmp(cfg_version(), "0.1.0") == 0);
  test_run();
  test_errors();
  test_operators();
  test_cost();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("c api: ok\n");
  return 0;
}
