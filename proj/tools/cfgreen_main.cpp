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

// Command-line driver. Everything goes through the C API; flags are folded
// into a JSON config on top of --config and handed to cfg_run_json.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfgreen/cfgreen.h"

namespace {

using nlohmann::json;

int exit_code(cfg_status s) {
  switch (s) {
    case CFG_OK: return 0;
    case CFG_ERR_CONFIG:
    case CFG_ERR_INVALID_ARGUMENT: return 2;
    case CFG_ERR_NUMERIC: return 3;
    case CFG_ERR_IO: return 4;
    default: return 1;
  }
}

struct Flags {
  std::string config, out, format, oracle, dump_operators;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string model, pool, op, levels, backend, sigma, sigma_path, form, shots_list;
  std::optional<int> sites, points, repeats, trials, fill_up, fill_down;
  std::optional<double> t, U, eta, omega_min, omega_max, epsilon, r, threshold, s;
  std::optional<std::uint64_t> shots;
  std::optional<int> n_modes, k0, d, n;
  std::optional<double> eps;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its keys");
  sub->add_option("--out", f.out, "output file (stdout when omitted)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", f.seed, "64-bit seed");
  sub->add_option("--threads", f.threads, "worker threads for grid evaluation");
}

void add_model(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "hubbard1d or dimer")->check(CLI::IsMember({"hubbard1d", "dimer"}));
  sub->add_option("--sites", f.sites, "chain length");
  sub->add_option("--t", f.t, "hopping");
  sub->add_option("--U", f.U, "on-site interaction");
  sub->add_option("--filling-up", f.fill_up, "spin-up particle number of the ground-state sector");
  sub->add_option("--filling-down", f.fill_down, "spin-down particle number of the ground-state sector");
  sub->add_option("--pool", f.pool, "operator pool, e.g. a_up:0-3 or n_up:0");
  sub->add_option("--op", f.op, "single operator, e.g. n_up:0");
  sub->add_option("--levels", f.levels, "levels, e.g. 0,1,2 or 0-3");
  sub->add_option("--eta", f.eta, "imaginary part of the frequency");
  sub->add_option("--omega-min", f.omega_min);
  sub->add_option("--omega-max", f.omega_max);
  sub->add_option("--points", f.points, "grid points");
  sub->add_option("--backend", f.backend, "exact, sampled or perturbed")
      ->check(CLI::IsMember({"exact", "sampled", "perturbed"}));
  sub->add_option("--shots", f.shots, "shots per Pauli word (sampled backend)");
  sub->add_option("--epsilon", f.epsilon, "spurious-state weight (perturbed backend)");
  sub->add_option("--sigma", f.sigma, "spurious state: mixed, random or file")
      ->check(CLI::IsMember({"mixed", "random", "file"}));
  sub->add_option("--sigma-path", f.sigma_path, "amplitude file for --sigma file");
  sub->add_option("--oracle", f.oracle, "lehmann or quadrature")->check(CLI::IsMember({"lehmann", "quadrature"}));
  sub->add_option("--threshold", f.threshold, "relative eigenvalue cutoff for overlap matrices");
  sub->add_option("--form", f.form, "normalized or unnormalized")
      ->check(CLI::IsMember({"normalized", "unnormalized"}));
  sub->add_option("--r", f.r, "truncation-bound parameter in (0, 1/2)");
  sub->add_option("--dump-operators", f.dump_operators, "write the operator chain to this file");
}

json overrides(const Flags& f) {
  json j = json::object();
  if (f.seed) j["seed"] = *f.seed;
  if (f.threads) j["threads"] = *f.threads;
  if (!f.format.empty()) j["format"] = f.format;
  if (!f.out.empty()) j["out"] = f.out;
  if (!f.model.empty()) j["model"] = f.model;
  if (f.sites) j["sites"] = *f.sites;
  if (f.t) j["t"] = *f.t;
  if (f.U) j["U"] = *f.U;
  if (f.fill_up || f.fill_down) {
    j["filling"]["up"] = f.fill_up.value_or(0);
    j["filling"]["down"] = f.fill_down.value_or(0);
  }
  if (!f.pool.empty()) j["pool"] = f.pool;
  if (!f.op.empty()) j["op"] = f.op;
  if (!f.levels.empty()) j["levels"] = f.levels;
  if (f.eta) j["grid"]["eta"] = *f.eta;
  if (f.omega_min) j["grid"]["omega_min"] = *f.omega_min;
  if (f.omega_max) j["grid"]["omega_max"] = *f.omega_max;
  if (f.points) j["grid"]["points"] = *f.points;
  if (!f.backend.empty()) j["backend"]["kind"] = f.backend;
  if (f.shots) j["backend"]["shots"] = *f.shots;
  if (f.epsilon) j["backend"]["epsilon"] = *f.epsilon;
  if (!f.sigma.empty()) j["backend"]["sigma"] = f.sigma;
  if (!f.sigma_path.empty()) j["backend"]["sigma_path"] = f.sigma_path;
  if (!f.oracle.empty()) j["oracle"] = f.oracle;
  if (f.threshold) j["threshold"] = *f.threshold;
  if (!f.form.empty()) j["form"] = f.form;
  if (f.r) j["r"] = *f.r;
  if (!f.dump_operators.empty()) j["dump_operators"] = true;
  if (!f.shots_list.empty()) {
    json list = json::array();
    std::stringstream ss(f.shots_list);
    std::string item;
    while (std::getline(ss, item, ',')) list.push_back(static_cast<std::uint64_t>(std::stod(item)));
    j["shots"]["list"] = list;
  }
  if (f.repeats) j["shots"]["repeats"] = *f.repeats;
  if (f.s) j["stability"]["s"] = *f.s;
  if (f.trials) j["stability"]["trials"] = *f.trials;
  if (f.n_modes) j["cost"]["n_modes"] = *f.n_modes;
  if (f.k0) j["cost"]["k0"] = *f.k0;
  if (f.d) j["cost"]["d"] = *f.d;
  if (f.n) j["cost"]["n"] = *f.n;
  if (f.eps) j["cost"]["eps"] = *f.eps;
  return j;
}

int fail(cfg_status s) {
  std::fprintf(stderr, "cfgreen: %s\n", cfg_last_error_message());
  return exit_code(s);
}

int execute(const std::string& sub, const Flags& f) {
  json cfg = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) {
      std::fprintf(stderr, "cfgreen: cannot read config '%s'\n", f.config.c_str());
      return 4;
    }
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      std::fprintf(stderr, "cfgreen: config '%s' is not valid JSON: %s\n", f.config.c_str(), e.what());
      return 2;
    }
  }
  cfg.merge_patch(overrides(f));
  cfg["subcommand"] = sub;

  cfg_result* res = nullptr;
  cfg_status st = cfg_run_json(sub.c_str(), cfg.dump().c_str(), &res);
  if (st != CFG_OK) return fail(st);

  const std::string format = cfg.value("format", std::string("csv"));
  const std::string out = cfg.value("out", std::string());
  if (out.empty() || out == "-") {
    char* text = nullptr;
    st = cfg_result_serialize(res, format.c_str(), &text);
    if (st == CFG_OK) {
      std::fputs(text, stdout);
      cfg_string_free(text);
    }
  } else {
    st = cfg_result_write(res, out.c_str(), format.c_str());
  }
  if (st == CFG_OK && !f.dump_operators.empty()) {
    char* text = nullptr;
    st = cfg_result_operator_dump(res, &text);
    if (st == CFG_OK) {
      std::ofstream d(f.dump_operators);
      d << text;
      cfg_string_free(text);
      if (!d) {
        std::fprintf(stderr, "cfgreen: cannot write '%s'\n", f.dump_operators.c_str());
        cfg_result_destroy(res);
        return 4;
      }
    }
  }
  cfg_result_destroy(res);
  return st == CFG_OK ? 0 : fail(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continued-fraction Green's functions for small lattice models"};
  app.set_version_flag("--version", std::string(cfg_version()));
  app.require_subcommand(1);
  Flags f;

  auto* scalar = app.add_subcommand("scalar", "single-operator recursion vs the exact oracle");
  auto* matrix = app.add_subcommand("matrix", "operator-pool recursion vs the exact oracle");
  auto* shots = app.add_subcommand("shots", "error vs shots per Pauli word");
  auto* stability = app.add_subcommand("stability", "coefficient-noise stability experiment");
  auto* cost = app.add_subcommand("cost", "measurement-cost estimate");
  auto* oracle = app.add_subcommand("oracle", "exact Green's function only");
  for (auto* s : {scalar, matrix, shots, stability, oracle}) {
    add_common(s, f);
    add_model(s, f);
  }
  add_common(cost, f);
  shots->add_option("--shots-list", f.shots_list, "comma-separated shot counts, e.g. 1e3,1e4");
  shots->add_option("--repeats", f.repeats, "seeded repeats per shot count");
  stability->add_option("--s", f.s, "relative coefficient noise");
  stability->add_option("--trials", f.trials, "noise draws");
  cost->add_option("--n-modes", f.n_modes, "fermionic modes");
  cost->add_option("--k0", f.k0, "order of the initial operators");
  cost->add_option("--d", f.d, "order of the Hamiltonian terms");
  cost->add_option("--n", f.n, "continued-fraction level");
  cost->add_option("--eps", f.eps, "target precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto* s : app.get_subcommands()) return execute(s->get_name(), f);
  return 2;
}
