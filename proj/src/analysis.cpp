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

#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace cfgreen {
namespace {

// Static partition over [0, n); the result never depends on the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t nt = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += nt) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string join_levels(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

void base_metadata(Table& t, const RunConfig& cfg) {
  t.metadata = {{"version", kVersion},
                {"subcommand", cfg.subcommand},
                {"model", to_string(cfg.model.kind)},
                {"sites", std::to_string(cfg.model.kind == ModelKind::dimer ? 2 : cfg.model.sites)},
                {"t", format_number(cfg.model.t)},
                {"U", format_number(cfg.model.U)},
                {"pool", format_pool(cfg.pool)},
                {"backend", to_string(cfg.backend.kind)},
                {"seed", std::to_string(cfg.seed)}};
}

std::string op_dump_header(int level, int k) {
  return "# level " + std::to_string(level) + " op " + std::to_string(k) + "\n";
}

// Oracle values of G_{X_i, X_j^dag} on the grid for every (i, j).
std::vector<std::vector<Complex>> oracle_grid(const Experiment& ex, const std::vector<OperatorSum>& X,
                                              const std::vector<Complex>& omegas, const RunConfig& cfg) {
  const std::size_t n = X.size();
  std::vector<std::vector<Complex>> out(n * n);
  std::vector<OperatorSum> Xd;
  for (const auto& x : X) Xd.push_back(dagger(x));
  parallel_for(n * n, cfg.threads, [&](std::size_t idx) {
    const std::size_t i = idx / n, j = idx % n;
    if (cfg.oracle == OracleKind::lehmann) {
      out[idx] = lehmann_green(ex.spectrum, *ex.rho, X[i], Xd[j], omegas);
    } else {
      const auto pe = lehmann_poles(ex.spectrum, *ex.rho, X[i], Xd[j]);
      const double T = quadrature_horizon(cfg.grid.eta, std::abs(pe.static_weight()));
      out[idx] = time_quadrature_green(ex.spectrum, *ex.rho, X[i], Xd[j], omegas, T);
    }
  });
  return out;
}

void push_row(Table& t, Complex w, int level, int i, int j, Complex g, Complex o) {
  t.rows.push_back({w.real(), w.imag(), static_cast<double>(level), static_cast<double>(i),
                    static_cast<double>(j), g.real(), g.imag(), o.real(), o.imag(), std::abs(g - o)});
}

MatrixOptions matrix_options(const RunConfig& cfg) {
  MatrixOptions o;
  o.threshold = cfg.effective_threshold();
  return o;
}

const OperatorSum& single_op(const Experiment& ex) {
  if (ex.ops.size() != 1)
    throw ConfigError("scalar recursion needs exactly one operator, pool has " +
                      std::to_string(ex.ops.size()));
  return ex.ops[0];
}

double median_of(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<Complex> GridSpec::omegas() const {
  std::vector<Complex> w;
  w.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? omega_min
                                 : omega_min + (omega_max - omega_min) * k / static_cast<double>(points - 1);
    w.emplace_back(x, eta);
  }
  return w;
}

int RunConfig::max_level() const { return *std::max_element(levels.begin(), levels.end()); }

double RunConfig::effective_threshold() const {
  if (threshold) return *threshold;
  return backend.kind == BackendKind::sampled ? 1e-3 : 1e-10;
}

void RunConfig::validate() const {
  if (!(grid.eta > 0)) throw ConfigError("grid.eta must be > 0");
  if (grid.points < 2) throw ConfigError("grid.points must be >= 2");
  if (!(grid.omega_max >= grid.omega_min)) throw ConfigError("grid.omega_max < grid.omega_min");
  if (levels.empty()) throw ConfigError("levels must be nonempty");
  for (int l : levels)
    if (l < 0) throw ConfigError("levels must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (backend.kind == BackendKind::sampled && backend.shots < 1) throw ConfigError("backend.shots must be >= 1");
  if (backend.kind == BackendKind::perturbed && !(backend.epsilon >= 0 && backend.epsilon <= 1))
    throw ConfigError("backend.epsilon must lie in [0, 1]");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (model.kind == ModelKind::hubbard1d && model.sites < 1) throw ConfigError("sites must be >= 1");
}

std::size_t Table::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

Experiment build_experiment(const RunConfig& cfg) {
  Experiment ex;
  ex.model = cfg.model;
  if (cfg.model.kind == ModelKind::dimer) {
    ex.H = build_dimer_compact(cfg.model.U, cfg.model.t);
    ex.spectrum = diagonalize(ex.H);
    ex.ops = build_dimer_pool(cfg.pool);
    if (cfg.model.t > 0) {
      ex.rho = std::make_unique<DensityState>(
          DensityState::pure(dimer_ground_state(cfg.model.U, cfg.model.t), ex.H));
    } else {
      ex.rho = std::make_unique<DensityState>(ground_state_in_sector(ex.spectrum, {}, {}));
    }
  } else {
    HubbardSpec spec{cfg.model.sites, cfg.model.t, cfg.model.U};
    ex.H = build_hubbard(spec);
    ex.spectrum = diagonalize(ex.H);
    ex.ops = build_pool(cfg.pool, spec);
    const int N = cfg.model.sites;
    const auto fill = cfg.model.filling.value_or(std::make_pair((N + 1) / 2, N / 2));
    const Spin up = Spin::up, dn = Spin::down;
    const std::vector<OperatorSum> numbers{total_number(spec, &up), total_number(spec, &dn)};
    const std::vector<double> targets{static_cast<double>(fill.first), static_cast<double>(fill.second)};
    ex.rho = std::make_unique<DensityState>(ground_state_in_sector(ex.spectrum, numbers, targets));
  }
  return ex;
}

Table run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Experiment ex = build_experiment(cfg);
  const auto backend = make_backend(cfg.backend, *ex.rho, ex.H);
  const auto omegas = cfg.grid.omegas();

  Table t;
  base_metadata(t, cfg);
  t.metadata.push_back({"oracle", to_string(cfg.oracle)});
  t.metadata.push_back({"levels", join_levels(cfg.levels)});
  t.metadata.push_back({"fingerprint", backend->fingerprint()});
  t.columns = greens_columns();

  if (cfg.subcommand == "scalar") {
    const ScalarCFData data = scalar_recursion(ex.H, single_op(ex), cfg.max_level(), *backend);
    t.metadata.push_back({"terminated_at", data.terminated_at ? std::to_string(*data.terminated_at) : "none"});
    const auto oracle = oracle_grid(ex, {ex.ops[0]}, omegas, cfg)[0];
    for (int level : cfg.levels) {
      std::vector<Complex> g(omegas.size());
      parallel_for(omegas.size(), cfg.threads, [&](std::size_t k) { g[k] = eval_scalar_cf(data, omegas[k], level); });
      for (std::size_t k = 0; k < omegas.size(); ++k) push_row(t, omegas[k], level, 0, 0, g[k], oracle[k]);
    }
    if (cfg.dump_operators)
      for (std::size_t j = 0; j < data.chain.size(); ++j)
        t.operator_dump += op_dump_header(static_cast<int>(j), 0) + to_text(data.chain[j]);
    return t;
  }

  if (cfg.subcommand != "matrix") throw ConfigError("run_sweep: unknown engine '" + cfg.subcommand + "'");
  const MatrixCFData data = matrix_recursion(ex.H, ex.ops, cfg.max_level(), *backend, matrix_options(cfg));
  t.metadata.push_back({"form", to_string(cfg.form)});
  t.metadata.push_back({"threshold", format_number(data.threshold)});
  t.metadata.push_back({"terminated_at", data.terminated_at ? std::to_string(*data.terminated_at) : "none"});
  std::string ranks;
  for (const auto& lv : data.levels) ranks += (ranks.empty() ? "" : ",") + std::to_string(lv.rank);
  t.metadata.push_back({"ranks", ranks});
  for (const auto& w : data.warnings) t.metadata.push_back({"warning", w});

  const auto& ref_ops = cfg.form == MatrixForm::unnormalized ? ex.ops : data.levels[0].normalized_ops;
  const auto oracle = oracle_grid(ex, ref_ops, omegas, cfg);
  const std::size_t N = ex.ops.size();
  for (int level : cfg.levels) {
    std::vector<CMatrix> g(omegas.size());
    parallel_for(omegas.size(), cfg.threads,
                 [&](std::size_t k) { g[k] = eval_matrix_cf(data, omegas[k], level, cfg.form); });
    for (std::size_t k = 0; k < omegas.size(); ++k)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          push_row(t, omegas[k], level, static_cast<int>(i), static_cast<int>(j),
                   g[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), oracle[i * N + j][k]);
  }
  if (cfg.dump_operators)
    for (std::size_t p = 0; p < data.levels.size(); ++p)
      for (std::size_t k = 0; k < N; ++k)
        t.operator_dump += op_dump_header(static_cast<int>(p), static_cast<int>(k)) +
                           to_text(data.levels[p].normalized_ops[k]);
  return t;
}

Table run_oracle(const RunConfig& cfg) {
  cfg.validate();
  const Experiment ex = build_experiment(cfg);
  const auto omegas = cfg.grid.omegas();
  Table t;
  base_metadata(t, cfg);
  t.metadata.push_back({"oracle", to_string(cfg.oracle)});
  t.columns = greens_columns();
  const auto oracle = oracle_grid(ex, ex.ops, omegas, cfg);
  const std::size_t N = ex.ops.size();
  for (std::size_t k = 0; k < omegas.size(); ++k)
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        const Complex o = oracle[i * N + j][k];
        push_row(t, omegas[k], -1, static_cast<int>(i), static_cast<int>(j), o, o);
      }
  return t;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs >= 2 matching points");
  double mx = 0, my = 0;
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0 && y[k] > 0)) throw DomainError("log-log fit needs positive data");
    lx.push_back(std::log10(x[k]));
    ly.push_back(std::log10(y[k]));
    mx += lx.back() / n;
    my += ly.back() / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

ShotNoiseResult shot_noise_study(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (cfg.shots_list.empty()) throw ConfigError("shots list is empty");
  const Experiment ex = build_experiment(cfg);
  const auto omegas = cfg.grid.omegas();
  const int top = cfg.max_level();

  // reference: exact backend, same levels
  BackendConfig exact_cfg = cfg.backend;
  exact_cfg.kind = BackendKind::exact;
  const auto exact = make_backend(exact_cfg, *ex.rho, ex.H);
  MatrixOptions ref_opts;
  ref_opts.threshold = cfg.threshold.value_or(1e-10);
  const MatrixCFData ref = matrix_recursion(ex.H, ex.ops, top, *exact, ref_opts);
  std::vector<std::vector<CMatrix>> ref_vals;
  for (int level : cfg.levels) {
    std::vector<CMatrix> v;
    for (Complex w : omegas) v.push_back(eval_matrix_cf(ref, w, level, cfg.form));
    ref_vals.push_back(std::move(v));
  }

  ShotNoiseResult res;
  base_metadata(res.table, cfg);
  res.table.metadata.push_back({"repeats", std::to_string(cfg.repeats)});
  res.table.metadata.push_back({"threshold", format_number(cfg.threshold.value_or(1e-3))});
  res.table.columns = {"shots", "level", "repeat", "max_err", "mean_err"};

  MatrixOptions opts;
  opts.threshold = cfg.threshold.value_or(1e-3);
  for (std::uint64_t M : cfg.shots_list) {
    const std::size_t R = static_cast<std::size_t>(cfg.repeats);
    std::vector<std::vector<double>> err(R, std::vector<double>(cfg.levels.size(), 0.0));
    auto mean_err = err;
    parallel_for(R, cfg.threads, [&](std::size_t rep) {
      const std::uint64_t sub = splitmix64(cfg.seed ^ splitmix64(M) ^ splitmix64(rep + 1));
      SampledBackend sb(*ex.rho, M, sub, cfg.backend.enforce_reality.value_or(ex.rho->commutes_with_H()));
      const MatrixCFData data = matrix_recursion(ex.H, ex.ops, top, sb, opts);
      for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
        double e = 0, sum = 0;
        for (std::size_t k = 0; k < omegas.size(); ++k) {
          const CMatrix g = eval_matrix_cf(data, omegas[k], cfg.levels[li], cfg.form);
          const auto diff = (g - ref_vals[li][k]).cwiseAbs();
          e = std::max(e, diff.maxCoeff());
          sum += diff.mean();
        }
        err[rep][li] = e;
        mean_err[rep][li] = sum / static_cast<double>(omegas.size());
      }
    });
    for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
      std::vector<double> col, col_max;
      for (std::size_t rep = 0; rep < R; ++rep) {
        res.table.rows.push_back({static_cast<double>(M), static_cast<double>(cfg.levels[li]),
                                  static_cast<double>(rep), err[rep][li], mean_err[rep][li]});
        col.push_back(mean_err[rep][li]);
        col_max.push_back(err[rep][li]);
      }
      if (li + 1 == cfg.levels.size())
        res.summary.push_back({M, median_of(col, 0.5), median_of(col, 0.25), median_of(col, 0.75),
                               median_of(col_max, 0.5)});
    }
  }
  if (res.summary.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& s : res.summary) {
      xs.push_back(static_cast<double>(s.shots));
      ys.push_back(s.median);
    }
    res.slope = loglog_slope(xs, ys);
  }
  return res;
}

Table stability_study(const RunConfig& cfg, StabilityReport* report) {
  cfg.validate();
  const Experiment ex = build_experiment(cfg);
  const auto backend = make_backend(cfg.backend, *ex.rho, ex.H);
  const ScalarCFData data = scalar_recursion(ex.H, single_op(ex), cfg.max_level(), *backend);
  const auto omegas = cfg.grid.omegas();
  StabilityReport rep = jones_thron_experiment(data, cfg.max_level(), cfg.noise_s, omegas, cfg.trials, cfg.seed);

  Table t;
  base_metadata(t, cfg);
  t.metadata.push_back({"s", format_number(cfg.noise_s)});
  t.metadata.push_back({"trials", std::to_string(cfg.trials)});
  t.metadata.push_back({"level", std::to_string(rep.level)});
  t.columns = {"omega0", "eta", "q", "max_rel_err", "bound", "applicable"};
  for (const auto& p : rep.points)
    t.rows.push_back({p.omega.real(), p.omega.imag(), p.q, p.max_rel_error,
                      p.applicable ? p.bound : -1.0, p.applicable ? 1.0 : 0.0});
  if (report) *report = std::move(rep);
  return t;
}

PerturbationResult perturbation_study(const RunConfig& cfg, const std::vector<double>& epsilons) {
  cfg.validate();
  const Experiment ex = build_experiment(cfg);
  const auto omegas = cfg.grid.omegas();
  const int n = cfg.max_level();
  const bool reality = cfg.backend.enforce_reality.value_or(ex.rho->commutes_with_H());
  const ExactBackend exact(*ex.rho, reality);
  const ScalarCFData ref = scalar_recursion(ex.H, single_op(ex), n, exact);
  const DensityState sigma = make_sigma(cfg.backend.sigma, ex.H.n_qubits(), cfg.backend.seed,
                                        cfg.backend.sigma_path, ex.H);
  PerturbationResult res;
  for (double eps : epsilons) {
    const PerturbedBackend pb(*ex.rho, sigma, eps, reality, ex.H);
    const ScalarCFData d = scalar_recursion(ex.H, single_op(ex), n, pb);
    double dev = 0;
    for (Complex w : omegas) dev = std::max(dev, std::abs(eval_scalar_cf(d, w, n) - eval_scalar_cf(ref, w, n)));
    res.epsilons.push_back(eps);
    res.deviations.push_back(dev);
  }
  if (epsilons.size() >= 2) res.slope = loglog_slope(res.epsilons, res.deviations);
  return res;
}

double measurement_cost_estimate(int n_modes, int k0, int d, int n, double eps) {
  if (n_modes < 1 || k0 < 1 || d < 1 || n < 0 || !(eps > 0))
    throw DomainError("cost inputs must be positive (n >= 0)");
  const long top = 2L * k0 + (2L * n + 1) * d;
  if (top > n_modes)
    throw DomainError("RDM order " + std::to_string(top) + " exceeds the number of modes " +
                      std::to_string(n_modes));
  using boost::multiprecision::cpp_int;
  double total = 0;
  cpp_int binom = 1;  // binom(N, 0)
  for (long x = 1; x <= top; ++x) {
    binom = binom * (n_modes - x + 1) / x;
    total += binom.convert_to<double>() * std::pow(static_cast<double>(x), 1.5);
  }
  return total * std::log(static_cast<double>(n_modes)) / (eps * eps);
}

Table run_cost(const RunConfig& cfg) {
  Table t;
  t.metadata = {{"version", kVersion}, {"subcommand", "cost"}};
  t.columns = {"n_modes", "k0", "d", "n", "eps", "cost"};
  t.rows.push_back({static_cast<double>(cfg.n_modes), static_cast<double>(cfg.k0), static_cast<double>(cfg.d),
                    static_cast<double>(cfg.cost_level), cfg.cost_eps,
                    measurement_cost_estimate(cfg.n_modes, cfg.k0, cfg.d, cfg.cost_level, cfg.cost_eps)});
  return t;
}

Table run(const RunConfig& cfg) {
  if (cfg.subcommand == "scalar" || cfg.subcommand == "matrix") return run_sweep(cfg);
  if (cfg.subcommand == "oracle") return run_oracle(cfg);
  if (cfg.subcommand == "shots") return shot_noise_study(cfg).table;
  if (cfg.subcommand == "stability") return stability_study(cfg);
  if (cfg.subcommand == "cost") return run_cost(cfg);
  throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

std::string to_string(ModelKind k) { return k == ModelKind::dimer ? "dimer" : "hubbard1d"; }
std::string to_string(OracleKind k) { return k == OracleKind::lehmann ? "lehmann" : "quadrature"; }

}  // namespace cfgreen
