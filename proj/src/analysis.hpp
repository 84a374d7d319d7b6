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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cf_matrix.hpp"
#include "cf_scalar.hpp"
#include "exact_reference.hpp"
#include "expectation_backends.hpp"
#include "lattice_models.hpp"

namespace cfgreen {

inline constexpr const char* kVersion = "0.1.0";

enum class ModelKind { hubbard1d, dimer };
enum class OracleKind { lehmann, quadrature };

struct ModelSpec {
  ModelKind kind = ModelKind::hubbard1d;
  int sites = 2;
  double t = 1.0;
  double U = 4.0;
  /// Sector (N_up, N_down) for the Hubbard ground state. Unset: N/2 each for
  /// even N, (N+1)/2 up and (N-1)/2 down for odd N.
  std::optional<std::pair<int, int>> filling;
};

struct GridSpec {
  double omega_min = -10.0;
  double omega_max = 10.0;
  int points = 500;
  double eta = 0.1;

  std::vector<Complex> omegas() const;
};

struct RunConfig {
  std::string subcommand = "matrix";  // scalar|matrix|shots|stability|cost|oracle
  ModelSpec model;
  OperatorPoolSpec pool{PoolKind::annihilation, {0}, {Spin::up}};
  BackendConfig backend;
  std::vector<int> levels{0};
  GridSpec grid;
  OracleKind oracle = OracleKind::lehmann;
  std::optional<double> threshold;  // unset: 1e-10 exact, 1e-3 sampled
  MatrixForm form = MatrixForm::unnormalized;
  double r = 0.25;
  std::uint64_t seed = 0;
  int threads = 1;
  bool dump_operators = false;

  // shots
  std::vector<std::uint64_t> shots_list{1000, 10000, 100000, 1000000};
  int repeats = 20;
  // stability
  double noise_s = 1e-3;
  int trials = 100;
  // cost
  int n_modes = 8;
  int k0 = 1;
  int d = 4;
  int cost_level = 0;
  double cost_eps = 0.01;

  std::string out;
  std::string format = "csv";

  int max_level() const;
  double effective_threshold() const;
  void validate() const;
};

/// Flat numeric table with `#` metadata. Every sweep, study and estimate is
/// reported through this type.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string operator_dump;  // not serialized with the table

  std::size_t column_index(const std::string& name) const;
};

inline const std::vector<std::string>& greens_columns() {
  static const std::vector<std::string> c{"omega0", "eta",    "level",     "i",         "j",
                                          "g_re",   "g_im",   "oracle_re", "oracle_im", "abs_err"};
  return c;
}

/// Model, state, spectrum and operators assembled from a config.
struct Experiment {
  ModelSpec model;
  OperatorSum H{1};
  std::vector<OperatorSum> ops;
  Spectrum spectrum;
  std::unique_ptr<DensityState> rho;
};

Experiment build_experiment(const RunConfig& cfg);

/// Scalar or matrix sweep with oracle comparison; `subcommand` picks the engine.
Table run_sweep(const RunConfig& cfg);
Table run_oracle(const RunConfig& cfg);

/// Quartiles of the grid-mean error over repeats, plus the median of the max-grid error.
struct ShotSummary {
  std::uint64_t shots = 0;
  double median = 0.0, q1 = 0.0, q3 = 0.0;
  double median_max = 0.0;
};

struct ShotNoiseResult {
  Table table;  // shots, level, repeat, max_err, mean_err
  std::vector<ShotSummary> summary;  // top configured level
  double slope = 0.0;  // least-squares log10(median) vs log10(shots)
};

/// Deviation of the sampled-backend continued fraction from the exact-backend
/// one at the same level, per (shots, repeat): max over the grid and entries,
/// and the mean over both. Near a pole the max saturates once the pole shift
/// exceeds eta, so the mean is the better-behaved scaling measure.
ShotNoiseResult shot_noise_study(const RunConfig& cfg);

Table stability_study(const RunConfig& cfg, StabilityReport* report = nullptr);

struct PerturbationResult {
  std::vector<double> epsilons;
  std::vector<double> deviations;  // max-grid |G~_n - G_n|
  double slope = 0.0;
};

/// Scalar chain at the top configured level, perturbed backend vs exact.
PerturbationResult perturbation_study(const RunConfig& cfg, const std::vector<double>& epsilons);

/// sum_{x=1}^{2 k0 + (2n+1) d} binom(N, x) x^{3/2} ln(N) / eps^2
double measurement_cost_estimate(int n_modes, int k0, int d, int n, double eps);
Table run_cost(const RunConfig& cfg);

/// Dispatch on cfg.subcommand.
Table run(const RunConfig& cfg);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// table_io.cpp
std::string format_number(double v);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);
Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);
void write_table(const Table& t, const std::string& path, const std::string& format);

// config.cpp
RunConfig parse_config_json(const std::string& text, const std::string& subcommand = "");
std::string to_string(ModelKind k);
std::string to_string(OracleKind k);

}  // namespace cfgreen
