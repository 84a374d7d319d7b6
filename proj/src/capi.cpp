// Copyright 2026 The cfgreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfgreen/cfgreen.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "analysis.hpp"
#include "errors.hpp"
#include "lattice_models.hpp"
#include "operator_algebra.hpp"

struct cfg_result {
  cfgreen::Table table;
};

struct cfg_operator {
  cfgreen::OperatorSum op;
};

namespace {

thread_local std::string g_last_error;

cfg_status status_for(cfgreen::ErrorKind k) {
  using cfgreen::ErrorKind;
  switch (k) {
    case ErrorKind::dimension:
    case ErrorKind::domain:
    case ErrorKind::config: return CFG_ERR_CONFIG;
    case ErrorKind::degeneracy:
    case ErrorKind::numeric: return CFG_ERR_NUMERIC;
    case ErrorKind::io: return CFG_ERR_IO;
    case ErrorKind::internal: return CFG_ERR_INTERNAL;
  }
  return CFG_ERR_INTERNAL;
}

template <class F>
cfg_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return CFG_OK;
  } catch (const cfgreen::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CFG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CFG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CFG_ERR_INTERNAL;
  }
}

cfg_status bad_arg(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return CFG_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

cfg_status emit_operator(cfg_operator** out, cfgreen::OperatorSum op) {
  *out = new cfg_operator{std::move(op)};
  return CFG_OK;
}

}  // namespace

extern "C" {

const char* cfg_version(void) { return cfgreen::kVersion; }
const char* cfg_last_error_message(void) { return g_last_error.c_str(); }
void cfg_string_free(char* s) { std::free(s); }

cfg_status cfg_run_json(const char* subcommand, const char* config_json, cfg_result** out) {
  if (!config_json || !out) return bad_arg("null config or output pointer");
  *out = nullptr;
  return guarded([&] {
    const auto cfg = cfgreen::parse_config_json(config_json, subcommand ? subcommand : "");
    auto res = std::make_unique<cfg_result>();
    res->table = cfgreen::run(cfg);
    *out = res.release();
  });
}

size_t cfg_result_rows(const cfg_result* r) { return r ? r->table.rows.size() : 0; }
size_t cfg_result_columns(const cfg_result* r) { return r ? r->table.columns.size() : 0; }

const char* cfg_result_column_name(const cfg_result* r, size_t col) {
  if (!r || col >= r->table.columns.size()) return nullptr;
  return r->table.columns[col].c_str();
}

cfg_status cfg_result_value(const cfg_result* r, size_t row, size_t col, double* value) {
  if (!r || !value) return bad_arg("null result or output pointer");
  if (row >= r->table.rows.size() || col >= r->table.columns.size()) return bad_arg("row/column out of range");
  *value = r->table.rows[row][col];
  return CFG_OK;
}

const char* cfg_result_metadata(const cfg_result* r, const char* key) {
  if (!r || !key) return nullptr;
  for (const auto& [k, v] : r->table.metadata)
    if (k == key) return v.c_str();
  return nullptr;
}

cfg_status cfg_result_write(const cfg_result* r, const char* path, const char* format) {
  if (!r || !path || !format) return bad_arg("null result, path or format");
  return guarded([&] { cfgreen::write_table(r->table, path, format); });
}

cfg_status cfg_result_serialize(const cfg_result* r, const char* format, char** out) {
  if (!r || !format || !out) return bad_arg("null result, format or output pointer");
  return guarded([&] {
    const std::string f = format;
    if (f == "csv")
      *out = dup_string(cfgreen::to_csv(r->table));
    else if (f == "json")
      *out = dup_string(cfgreen::to_json(r->table));
    else
      throw cfgreen::ConfigError("format must be csv or json");
  });
}

cfg_status cfg_result_operator_dump(const cfg_result* r, char** out) {
  if (!r || !out) return bad_arg("null result or output pointer");
  return guarded([&] { *out = dup_string(r->table.operator_dump); });
}

void cfg_result_destroy(cfg_result* r) { delete r; }

cfg_status cfg_operator_hubbard(int sites, double t, double U, cfg_operator** out) {
  if (!out) return bad_arg("null output pointer");
  return guarded([&] { emit_operator(out, cfgreen::build_hubbard({sites, t, U})); });
}

cfg_status cfg_operator_dimer(double U, double t, cfg_operator** out) {
  if (!out) return bad_arg("null output pointer");
  return guarded([&] { emit_operator(out, cfgreen::build_dimer_compact(U, t)); });
}

cfg_status cfg_operator_from_text(const char* text, int n_qubits, cfg_operator** out) {
  if (!text || !out) return bad_arg("null text or output pointer");
  return guarded([&] { emit_operator(out, cfgreen::from_text(text, n_qubits)); });
}

cfg_status cfg_operator_to_text(const cfg_operator* op, char** out) {
  if (!op || !out) return bad_arg("null operator or output pointer");
  return guarded([&] { *out = dup_string(cfgreen::to_text(op->op)); });
}

cfg_status cfg_operator_commutator(const cfg_operator* a, const cfg_operator* b, cfg_operator** out) {
  if (!a || !b || !out) return bad_arg("null operator or output pointer");
  return guarded([&] { emit_operator(out, cfgreen::commutator(a->op, b->op)); });
}

cfg_status cfg_operator_product(const cfg_operator* a, const cfg_operator* b, cfg_operator** out) {
  if (!a || !b || !out) return bad_arg("null operator or output pointer");
  return guarded([&] { emit_operator(out, cfgreen::multiply(a->op, b->op)); });
}

cfg_status cfg_operator_dagger(const cfg_operator* a, cfg_operator** out) {
  if (!a || !out) return bad_arg("null operator or output pointer");
  return guarded([&] { emit_operator(out, cfgreen::dagger(a->op)); });
}

cfg_status cfg_operator_max_weight(const cfg_operator* a, int* out) {
  if (!a || !out) return bad_arg("null operator or output pointer");
  *out = cfgreen::max_weight(a->op);
  return CFG_OK;
}

cfg_status cfg_operator_terms(const cfg_operator* a, size_t* out) {
  if (!a || !out) return bad_arg("null operator or output pointer");
  *out = a->op.size();
  return CFG_OK;
}

cfg_status cfg_operator_qubits(const cfg_operator* a, int* out) {
  if (!a || !out) return bad_arg("null operator or output pointer");
  *out = a->op.n_qubits();
  return CFG_OK;
}

void cfg_operator_destroy(cfg_operator* op) { delete op; }

cfg_status cfg_measurement_cost(int n_modes, int k0, int d, int n, double eps, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guarded([&] { *out = cfgreen::measurement_cost_estimate(n_modes, k0, d, n, eps); });
}

}  // extern "C"
